#pragma once

#include <functional>

#include "kdvlab/grid.hpp"

namespace kdv {

// Index (s, kappa) of the weighted Sobolev norm
//   ||f||_{s,kappa} = ( sum_xi (xi^2 + 4 kappa^2)^s |fhat(xi)|^2 )^{1/2}.
struct SobolevIndex {
  double s = 0.0;
  double kappa = 1.0;
};

double hs_kappa_norm(const Field& f, const SobolevIndex& idx);

// Multiplier calculus.  The symbol m must be Hermitian-symmetric,
// m(-xi) = conj(m(xi)), so that real fields map to real fields; the unpaired
// Nyquist bin takes the real part of its symbol value.
using Symbol = std::function<cplx(double)>;
Field apply_multiplier(const Field& f, const Symbol& m);
Field derivative(const Field& f, int order = 1);

// Free resolvent R0(k): symbol 1/(xi^2 + k^2), the periodization of
// convolution by exp(-k|x|)/(2k).  Identities use r0_apply(f, 2*kappa).
Field r0_apply(const Field& f, double k);

// 2/3-rule helpers for quadratic nonlinearities.
Field dealias23(const Field& f);
Field multiply_dealiased(const Field& a, const Field& b);
bool within_band23(const Field& f, double rel_tol = 1e-13);

// Residual sup-norm of  16 k^4 R0(2k) f  =  [4 k^2 + d^2 + R0(2k) d^4] f,
// the two sides evaluated by independent multiplier routes.
double verify_linear_identity(const Field& f, double kappa);

// Residual sup-norm of the bilinear resolvent identity.  The left side is
// assembled from the explicit two-frequency kernel
//   8 k^4 [xi^2 + (xi-eta)^2 + eta^2 + 24 k^2] /
//        ((xi^2+4k^2)((xi-eta)^2+4k^2)(eta^2+4k^2)),
// the right side from products of multiplier images; both sides are compared
// on the 2/3-dealiased band, where products of band-limited inputs are exact.
// Requires f, h band-limited to n/3 modes (errc::precondition otherwise).
double verify_quadratic_identity(const Field& f, const Field& h, double kappa);

// Hilbert-Schmidt identity on the line, both sides by quadrature:
//   lhs = integral of (exp(-k|x-y|)/(2k))^2 q(x) q(y) dx dy
//   rhs = (1/k) * integral of |qhat(xi)|^2 / (xi^2 + 4 k^2) dxi
// over a fixed window [-12, 12] with 4096 trapezoid points; the kernel's
// diagonal kink gets its Euler-Maclaurin h^2 jump correction, so both sides
// agree to O(h^4 kappa^4).  q must decay below 1e-12 of its peak at the
// window edge (errc::truncation otherwise).
struct LinePair {
  double lhs = 0.0;
  double rhs = 0.0;
};
LinePair hilbert_schmidt_identity_line(const std::function<double(double)>& q,
                                       double kappa);

// l^2 pairing of coefficient sequences: sum_xi fhat(xi) * conj(hhat(xi)).
double spectral_pairing(const Field& f, const Field& h);

}  // namespace kdv
