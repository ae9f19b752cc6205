#include "kdvlab/elliptic.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace kdv {
namespace {

constexpr double kPi = std::numbers::pi;

struct RawBundle {
  cplx wp, wpp, zeta, sigma;
};

// Laurent series of all four functions at the origin; requires |z| well
// inside the convergence disk (the caller halves first).
RawBundle bundle_series(cplx z, const Lattice& lat) {
  if (z == cplx(0.0, 0.0))
    return {cplx(HUGE_VAL, 0.0), cplx(HUGE_VAL, 0.0), cplx(HUGE_VAL, 0.0), cplx(0.0, 0.0)};
  const cplx z2 = z * z;
  RawBundle b;
  b.wp = 1.0 / z2;
  b.wpp = -2.0 / (z2 * z);
  b.zeta = 1.0 / z;
  cplx logsig(0.0, 0.0);
  cplx p = z2;  // z^{2k-2} for k = 2
  for (size_t k = 2; k < lat.laurent.size(); ++k) {
    const double ck = lat.laurent[k];
    if (ck != 0.0) {
      b.wp += ck * p;
      b.wpp += ck * static_cast<double>(2 * k - 2) * p / z;
      b.zeta -= ck * p * z / static_cast<double>(2 * k - 1);
      logsig -= ck * p * z2 / static_cast<double>(2 * k * (2 * k - 1));
    }
    p *= z2;
  }
  b.sigma = z * std::exp(logsig);
  return b;
}

// One duplication step z -> 2z for the whole bundle.
RawBundle bundle_duplicate(const RawBundle& in, const Lattice& lat) {
  const cplx wp2p = 6.0 * in.wp * in.wp - lat.g2 / 2.0;  // wp''
  const cplx wp3p = 12.0 * in.wp * in.wpp;               // wp'''
  const cplx r = wp2p / (2.0 * in.wpp);
  const cplx rprime = (wp3p * in.wpp - wp2p * wp2p) / (2.0 * in.wpp * in.wpp);
  RawBundle out;
  out.wp = -2.0 * in.wp + r * r;
  out.wpp = -in.wpp + r * rprime;
  out.zeta = 2.0 * in.zeta + r;
  out.sigma = -in.sigma * in.sigma * in.sigma * in.sigma * in.wpp;
  return out;
}

struct Reduced {
  cplx zr;
  long long m = 0, n = 0;
  double pole_dist = 0.0;
};

Reduced reduce_to_cell(cplx z, const Lattice& lat) {
  Reduced r;
  // nearbyint rounds halves to even, keeping z = omega1 (and omega3) inside
  // the centered cell instead of jumping to the equivalent -omega1.
  r.m = static_cast<long long>(std::nearbyint(z.real() / (2.0 * lat.omega1)));
  r.n = static_cast<long long>(std::nearbyint(z.imag() / (2.0 * lat.omega3_im)));
  r.zr = z - cplx(2.0 * lat.omega1 * r.m, 2.0 * lat.omega3_im * r.n);
  double d = std::abs(r.zr);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      if (a || b)
        d = std::min(d, std::abs(r.zr - cplx(2.0 * lat.omega1 * a,
                                             2.0 * lat.omega3_im * b)));
  r.pole_dist = d;
  return r;
}

RawBundle bundle_core(cplx z, const Lattice& lat) {
  const Reduced red = reduce_to_cell(z, lat);
  int j = 0;
  double scale = std::abs(red.zr);
  while (scale > 0.6 * lat.series_radius) {
    scale *= 0.5;
    ++j;
  }
  RawBundle b = bundle_series(red.zr / std::pow(2.0, j), lat);
  for (int i = 0; i < j; ++i) b = bundle_duplicate(b, lat);
  if (red.m != 0 || red.n != 0) {
    const cplx eta3(0.0, lat.eta3_im);
    const cplx eta = 2.0 * static_cast<double>(red.m) * lat.eta1 +
                     2.0 * static_cast<double>(red.n) * eta3;
    b.zeta += eta;
    const double sign = ((red.m + red.n + red.m * red.n) % 2 == 0) ? 1.0 : -1.0;
    const cplx omega = cplx(lat.omega1 * red.m, lat.omega3_im * red.n);
    b.sigma = sign * b.sigma * std::exp(eta * (red.zr + omega));
  }
  return b;
}

void require_away_from_pole(cplx z, const Lattice& lat) {
  if (reduce_to_cell(z, lat).pole_dist < 1e-6)
    fail(errc::pole_proximity, "evaluation within 1e-6 of a lattice point");
}

}  // namespace

Invariants lattice_invariants(double omega1, double omega3_im, int rows) {
  if (!(omega1 > 0.0) || !(omega3_im > 0.0))
    fail(errc::parameter, "lattice half-periods must be positive");
  if (rows < 8) fail(errc::parameter, "too few rows for the invariant sums");
  const double t = omega3_im / omega1;
  double S4 = 2.0 * std::pow(kPi, 4) / 90.0;   // n = 0 row
  double S6 = 2.0 * std::pow(kPi, 6) / 945.0;  // n = 0 row
  for (int n = 1; n <= rows; ++n) {
    const double y = kPi * n * t;
    // coth^2 stays finite for all y; S underflows harmlessly for large y.
    const double th = std::tanh(y);
    const double C = 1.0 / (th * th);  // cosh^2/sinh^2
    const double S = C - 1.0;          // 1/sinh^2
    if (S == 0.0) break;
    S4 += 2.0 * (std::pow(kPi, 4) / 3.0) * S * (2.0 * C + S);
    S6 += 2.0 * (-(std::pow(kPi, 6) / 15.0) * (2.0 * S * C * C + 11.0 * S * S * C + 2.0 * S * S * S));
  }
  Invariants inv;
  inv.g2 = 60.0 * S4 / std::pow(2.0 * omega1, 4);
  inv.g3 = 140.0 * S6 / std::pow(2.0 * omega1, 6);
  return inv;
}

Lattice Lattice::rectangular(double omega1, double omega3_im) {
  Lattice lat;
  lat.omega1 = omega1;
  lat.omega3_im = omega3_im;
  const Invariants inv = lattice_invariants(omega1, omega3_im);
  lat.g2 = inv.g2;
  lat.g3 = inv.g3;
  lat.series_radius = 2.0 * std::min(omega1, omega3_im);

  // Laurent recursion c_2 = g2/20, c_3 = g3/28,
  // c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}.
  const int K = 60;
  lat.laurent.assign(K + 1, 0.0);
  lat.laurent[2] = lat.g2 / 20.0;
  lat.laurent[3] = lat.g3 / 28.0;
  for (int k = 4; k <= K; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += lat.laurent[m] * lat.laurent[k - m];
    lat.laurent[k] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
  }

  // e1 and eta1 come from the evaluator itself; omega1 reduces to the base
  // cell with no quasi-period correction, so the still-unset eta fields are
  // not consulted.
  RawBundle at1 = bundle_core(cplx(omega1, 0.0), lat);
  lat.e1 = at1.wp.real();
  lat.eta1 = at1.zeta.real();
  lat.eta3_im = (lat.eta1 * omega3_im - kPi / 2.0) / omega1;  // Legendre relation

  const double e_scale = std::pow(1.0 + std::abs(lat.e1), 1.5);
  if (std::abs(at1.wp.imag()) > 1e-9 * (1.0 + std::abs(lat.e1)) ||
      std::abs(at1.wpp) > 1e-8 * e_scale)
    fail(errc::consistency, "half-period values are not those of a rectangular lattice");
  RawBundle probe = bundle_core(cplx(0.37 * omega1, 0.11 * omega3_im), lat);
  const cplx de = probe.wpp * probe.wpp -
                  (4.0 * probe.wp * probe.wp * probe.wp - lat.g2 * probe.wp - lat.g3);
  if (std::abs(de) > 1e-8 * (1.0 + std::pow(std::abs(probe.wp), 3)))
    fail(errc::consistency, "differential equation residual too large");
  return lat;
}

cplx wp(cplx z, const Lattice& lat) {
  require_away_from_pole(z, lat);
  return bundle_core(z, lat).wp;
}

cplx wp_prime(cplx z, const Lattice& lat) {
  require_away_from_pole(z, lat);
  return bundle_core(z, lat).wpp;
}

cplx zeta_fn(cplx z, const Lattice& lat) {
  require_away_from_pole(z, lat);
  return bundle_core(z, lat).zeta;
}

cplx sigma_fn(cplx z, const Lattice& lat) { return bundle_core(z, lat).sigma; }

WeierstrassBundle weierstrass_bundle(cplx z, const Lattice& lat) {
  require_away_from_pole(z, lat);
  RawBundle b = bundle_core(z, lat);
  return WeierstrassBundle{b.wp, b.wpp, b.zeta, b.sigma};
}

BranchPoint solve_b(double kappa, const Lattice& lat) {
  if (!(kappa > 0.0)) fail(errc::parameter, "kappa must be positive");
  const double target = kappa * kappa + lat.e1;
  auto f = [&](double b) { return bundle_core(cplx(b, 0.0), lat).wp.real() - target; };
  double lo = 2e-6 * lat.omega1;
  double hi = lat.omega1 * (1.0 - 1e-12);
  if (!(f(lo) > 0.0) || !(f(hi) < 0.0))
    fail(errc::no_solution, "kappa^2 + e1 is not attained on (0, omega1)");
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double b = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const RawBundle bb = bundle_core(cplx(b, 0.0), lat);
    const double step = (bb.wp.real() - target) / bb.wpp.real();
    b -= step;
    if (!(b > 0.0) || !(b < lat.omega1)) fail(errc::no_solution, "branch solve left (0, omega1)");
  }
  if (std::abs(f(b)) > 1e-9 * std::max(1.0, std::abs(target)))
    fail(errc::no_solution, "branch solve did not converge");
  return BranchPoint{kappa, b};
}

}  // namespace kdv
