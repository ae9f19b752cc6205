#pragma once

#include <array>

#include "kdvlab/grid.hpp"

namespace kdv {

// Transfer matrix of -psi'' + q psi = -kappa^2 psi over one period, mapping
// (psi, psi') at x = 0 to x = period.  The true matrix is exp(log_scale)*mat;
// log_scale stays 0 until entries threaten overflow (kappa*period large).
struct Monodromy {
  std::array<std::array<double, 2>, 2> mat{};
  double log_scale = 0.0;

  double trace() const;      // exp(log_scale) * (mat00 + mat11)
  double det() const;        // exp(2*log_scale) * det(mat)
  double log_trace() const;  // log of |trace|, overflow-safe
  bool hyperbolic() const;   // trace > 2 (below-spectrum certificate)
};

// Fixed-step even-order extrapolated-midpoint integration of the Hill system.
// Stage potentials come from exact trigonometric refinement of q's spectrum,
// so the scheme sees the smooth potential, not a linear interpolant.
// Throws errc::spectral_band when the computed trace is <= 2.
Monodromy monodromy(const Field& q, double kappa);

// Floquet solutions over one period, jointly normalized so the Wronskian
// psi+ psi-' - psi+' psi- equals 1 and psi+-(0) coincide (the symmetric
// split of the scaling freedom; only the product g is contractual).
// rho in (0,1) is the decaying multiplier: psi+(x+period) = rho * psi+(x).
struct FloquetPair {
  Field psi_plus;
  Field psi_minus;
  double rho = 0.0;
  double wronskian = 0.0;
};
FloquetPair floquet_pair(const Field& q, double kappa);

enum class GreenMethod { floquet, nullspace };

// Diagonal of the whole-line resolvent kernel of -d^2 + q at energy
// -kappa^2.  For periodic q this is psi+ * psi-, NOT the Green's function of
// the periodic-boundary operator.
struct GreenDiag {
  Field g;
  double kappa = 0.0;
  GreenMethod method = GreenMethod::floquet;
};
GreenDiag diagonal_green(const Field& q, double kappa);

// Independent route: kernel of the third-order operator
//   L3 u = u''' - 2 q u' - 2 (q u)' - 4 kappa^2 u'
// assembled in the Fourier basis over the symmetric mode band |m| <= n/2-1
// (odd dimension; the operator is anti-Hermitian there, so the periodic
// kernel is one-dimensional, spanned by g).  Rows are premultiplied by
// 1/(xi^2+4kappa^2) -- an invertible diagonal factor that leaves the kernel
// unchanged but keeps the matrix norm O(xi) instead of O(xi^3), so the
// kernel direction is resolvable in double precision.  The smallest singular
// direction is sign-fixed to be positive and scaled via the product identity
// g g'' - (g')^2/2 - 2(q+kappa^2) g^2 = -1/2.
// Throws errc::degenerate_kernel when the second singular value falls below
// 1e-6 of the largest.
GreenDiag diagonal_green_nullspace(const Field& q, double kappa);

// Per-period renormalized logarithm of the perturbation determinant,
//   alpha = integral over one period of [ -1/(2g) + kappa + 2 kappa R0(2kappa) q ],
// evaluated as period * (zero Fourier mode), spectrally exact.
struct AlphaValue {
  double value = 0.0;
  double kappa = 0.0;
  bool per_period = true;
};
AlphaValue alpha(const Field& q, double kappa);
AlphaValue alpha_given_green(const Field& q, const GreenDiag& gd);

// Inverse map: q = [g'/(2g)]' + [g'/(2g)]^2 + 1/(4g^2) - kappa^2.
Field recover_potential(const GreenDiag& gd);

// F = (1/g) { (g')^2/4 - kappa^2 (g - 1/(2kappa))^2 }, the periodic
// antiderivative of q g' (up to constants): F' = q g' pointwise.
Field antiderivative_F(const Field& q, const GreenDiag& gd);

// Per-period integral of g(.;vkappa,q) * g'(.;kappa,q); zero in exact
// arithmetic for any pair of energies.
double commutativity_integral(const Field& q, double kappa, double vkappa);

}  // namespace kdv
