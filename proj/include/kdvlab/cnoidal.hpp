#pragma once

#include "kdvlab/elliptic.hpp"
#include "kdvlab/grid.hpp"

namespace kdv {

// Weierstrass form of the cnoidal wave:
//   V(t,x) = 2 wp(x + 6 e1 t + omega3) + e1,   e1 = wp(omega1),
// a leftward traveling wave of speed 6 e1 with spatial period 2*omega1.
struct CnoidalWeierstrass {
  Lattice lat;
  double kdv_speed = 0.0;  // 6 * e1
};
CnoidalWeierstrass cnoidal_weierstrass(const Lattice& lat);
double profile_weierstrass(const Lattice& lat, double t, double x);
// Sampler; the grid period must equal 2*omega1 (errc::parameter otherwise).
Field cnoidal_field(const Lattice& lat, double t, const PeriodicGrid& g);

// Jacobi form:
//   V(t,x) = eta - h cn^2[ sqrt(h/(2k^2)) (x - c t); k ],
//   eta = (h/k^2) (E/K - 1 + k^2),   c = (2h/k^2) (2 - k^2 - 3E/K).
// k = 0 collapses the width sqrt(h/(2k^2)) and is rejected (errc::parameter),
// as is k >= 1.  The modulus-0 limit of cn itself is cos and is exercised
// through jacobi_cn_dn directly.
struct JacobiParams {
  double k = 0.0, h = 0.0;
  double K = 0.0, E = 0.0;  // complete elliptic integrals at modulus k
  double eta = 0.0, c = 0.0;
  double width = 0.0;       // sqrt(h/(2k^2))
  double period = 0.0;      // spatial period 2K/width
};
JacobiParams jacobi_params(double k, double h);
double profile_jacobi(double k, double h, double t, double x);

// AGM machinery: complete integrals K(k), E(k) and cn/dn by the descending
// Landen transformation.  Accepts k in [0,1).
double agm_complete_K(double k);
double agm_complete_E(double k);
struct JacobiCnDn {
  double cn = 0.0, dn = 0.0;
};
JacobiCnDn jacobi_cn_dn(double u, double k);

// Traveling-wave structure of the cnoidal profile under the H_kappa flow:
//   g(x;kappa,V) = c1 + c2 V(x),        nu = 8 kappa^5 / wp'(b) + 4 kappa^2,
//   c1 = (wp(b) + e1/2)/(-wp'(b)),      c2 = 1/(2 wp'(b)).
struct HkTravelingWave {
  double kappa = 0.0;
  BranchPoint bp;
  double nu = 0.0, c1 = 0.0, c2 = 0.0;
};
HkTravelingWave hk_traveling_wave(const Lattice& lat, double kappa);

// Closed-form Floquet solutions
//   psi_pm(x) = a_pm sigma(x + omega3 +- b) / (sigma(x + omega3) sigma(+-b))
//               * exp(-+ zeta(b) x),    a_pm = +-(-wp'(b))^{-1/2},
// together with their exact logarithmic derivatives
//   psi_pm'/psi_pm = zeta(x + omega3 +- b) - zeta(x + omega3) -+ zeta(b).
struct ClosedFormPoint {
  double psi_plus = 0.0, psi_minus = 0.0;
  double dpsi_plus = 0.0, dpsi_minus = 0.0;  // derivatives in x
};
ClosedFormPoint floquet_closed_form(const Lattice& lat, double kappa, double x);

}  // namespace kdv
