#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kdvlab/grid.hpp"

// Slow, independent reference computations the test suites compare the
// library against.  Everything here is built from defining formulas only:
// truncated lattice sums, quadrature of defining integrals, fixed-step ODE
// integration, and a finite-difference boundary-value solve.  None of it
// shares code with the fast paths under test.
namespace oracle {

using cplx = std::complex<double>;

// Square-lattice (omega1 = omega3_im = 1) reference values, frozen from
// closed forms: with K the complete elliptic integral at modulus 1/sqrt(2)
// (arithmetic-geometric mean, exact to the ulp), the lemniscatic lattice has
// e1 = K^2/2, g2 = 4 e1^2 = K^4, g3 = 0, and eta1 = pi/4 (Legendre relation
// plus the quarter-turn symmetry).  The period mean of 2*wp(x+omega3) + e1
// is e1 - pi/2.
inline constexpr double kSquareK = 1.8540746773013717;     // K(1/sqrt 2)
inline constexpr double kSquareE = 1.3506438810476753;     // E(1/sqrt 2)
inline constexpr double kSquareE1 = 1.7187964545050927;    // K^2/2
inline constexpr double kSquareG2 = 11.817045008077109;    // K^4
inline constexpr double kSquareEta1 = 0.78539816339744828; // pi/4
inline constexpr double kSquareMean = 0.14800012771019611; // e1 - pi/2

// Truncated pair-symmetrized lattice sums over half-periods (omega1,
// i*omega3_im), all four functions at once.  Summation over the full square
// |m|, |n| <= radius cancels the odd-power tails exactly, so the truncation
// error is O(radius^-2); radius 160 lands near 1e-4 relative.
struct BruteWeierstrass {
  cplx wp, wp_prime, zeta, sigma;
};
BruteWeierstrass brute_weierstrass(cplx z, double omega1, double omega3_im,
                                   int radius);

// Complete elliptic integrals straight from their defining quadratures
// (composite Simpson on [0, pi/2]; the integrands are smooth for k < 1).
double quad_complete_K(double k);
double quad_complete_E(double k);

// Jacobi cn by fixed-step RK4 on the coupled system
//   sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn  from (0, 1, 1).
double ode_jacobi_cn(double u, double k);

// Diagonal of the whole-line Green's function of -d^2/dx^2 + q + kappa^2 by
// a tridiagonal finite-difference solve on `copies` periodic copies with
// Dirichlet ends (boundary influence decays like exp(-kappa*copies*L)),
// Richardson-extrapolated across two meshes (refine and 2*refine points per
// grid cell), returned at the sample nodes of the middle copy.
std::vector<double> fd_green_diagonal(const kdv::Field& q, double kappa,
                                      int copies = 7, int refine = 6);

// Seeded band-limited field with 1/(1+m^2) coefficient decay, sup-norm
// `amplitude`.  Raw-bit uniforms (ldexp of the top 53 bits) keep the stream
// identical across standard libraries.
kdv::Field random_field(const kdv::PeriodicGrid& g, std::uint64_t seed,
                        int max_mode, bool zero_mean = false,
                        double amplitude = 1.0);

double sup_diff(const kdv::Field& a, const kdv::Field& b);

}  // namespace oracle
