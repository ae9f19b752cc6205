#pragma once

#include <complex>
#include <vector>

#include "kdvlab/errors.hpp"

namespace kdv {

using cplx = std::complex<double>;

// Rectangular Weierstrass lattice with generators 2*omega1 (real) and
// 2*omega3 = 2i*omega3_im.  Construction computes the invariants g2, g3 by
// exponentially convergent row sums over the lattice, e1 = wp(omega1), and
// eta1 = zeta_fn(omega1) (used for quasi-period bookkeeping), and caches the
// Laurent coefficients of wp at the origin.
struct Lattice {
  double omega1 = 0.0;
  double omega3_im = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double e1 = 0.0;    // wp(omega1), real on rectangular lattices
  double eta1 = 0.0;  // zeta(omega1)
  double eta3_im = 0.0;  // zeta(omega3)/i, from the Legendre relation

  std::vector<double> laurent;  // c_k with wp = z^-2 + sum_k c_k z^(2k-2), k>=2
  double series_radius = 0.0;   // |z| below which the cached series converges well

  static Lattice rectangular(double omega1, double omega3_im);
};

struct Invariants {
  double g2 = 0.0, g3 = 0.0, e1 = 0.0;
};
// Row-summed Eisenstein series; `rows` bounds the number of horizontal rows
// of lattice points (convergence in rows is exponential, so 200 vs 400 agree
// to machine precision -- the refinement check used in tests).
Invariants lattice_invariants(double omega1, double omega3_im, int rows = 200);

// Weierstrass functions by lattice reduction + Laurent series + duplication.
// wp, wp_prime, zeta_fn throw errc::pole_proximity within 1e-6 of a lattice
// point; sigma_fn is entire and accepts any z.
cplx wp(cplx z, const Lattice& lat);
cplx wp_prime(cplx z, const Lattice& lat);
cplx zeta_fn(cplx z, const Lattice& lat);
cplx sigma_fn(cplx z, const Lattice& lat);

struct WeierstrassBundle {
  cplx wp, wp_prime, zeta, sigma;
};
WeierstrassBundle weierstrass_bundle(cplx z, const Lattice& lat);

// Branch parameter b in (0, omega1) with wp(b) - e1 = kappa^2, by bracketed
// bisection plus Newton polish; errc::no_solution when kappa^2 is not
// attainable on (0, omega1).
struct BranchPoint {
  double kappa = 0.0;
  double b = 0.0;
};
BranchPoint solve_b(double kappa, const Lattice& lat);

}  // namespace kdv
