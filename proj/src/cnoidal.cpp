#include "kdvlab/cnoidal.hpp"

#include <cmath>
#include <vector>

namespace kdv {
namespace {

constexpr double kAgmTol = 8e-16;  // a few ulp; a tighter bound can stall at the last bit

}  // namespace

CnoidalWeierstrass cnoidal_weierstrass(const Lattice& lat) {
  return CnoidalWeierstrass{lat, 6.0 * lat.e1};
}

double profile_weierstrass(const Lattice& lat, double t, double x) {
  const cplx z(x + 6.0 * lat.e1 * t, lat.omega3_im);
  const cplx v = 2.0 * wp(z, lat) + lat.e1;
  if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real())))
    fail(errc::consistency, "profile has an imaginary residue; lattice is not rectangular");
  return v.real();
}

Field cnoidal_field(const Lattice& lat, double t, const PeriodicGrid& g) {
  if (std::abs(g.period - 2.0 * lat.omega1) > 1e-12 * lat.omega1)
    fail(errc::parameter, "grid period must equal the lattice period 2*omega1");
  std::vector<double> vs(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) vs[static_cast<size_t>(j)] = profile_weierstrass(lat, t, g.node(j));
  return Field::from_samples(g, std::move(vs));
}

double agm_complete_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) fail(errc::parameter, "modulus must lie in [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int i = 0; i < 60 && std::abs(a - b) > kAgmTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return PeriodicGrid::pi() / (2.0 * a);
}

double agm_complete_E(double k) {
  if (!(k >= 0.0 && k < 1.0)) fail(errc::parameter, "modulus must lie in [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  double sum = 0.5 * k * k;  // 2^{-1} c_0^2
  double pw = 1.0;           // 2^{i-1} for the i-th iterate
  for (int i = 0; i < 60 && std::abs(a - b) > kAgmTol * a; ++i) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    sum += pw * c * c;
    pw *= 2.0;
  }
  return PeriodicGrid::pi() / (2.0 * a) * (1.0 - sum);
}

JacobiCnDn jacobi_cn_dn(double u, double k) {
  if (!(k >= 0.0 && k < 1.0)) fail(errc::parameter, "modulus must lie in [0, 1)");
  if (k < 1e-12) return JacobiCnDn{std::cos(u), 1.0};
  // Descending Landen: run the AGM, then recover the amplitude by the
  // backward recurrence phi_{i-1} = (phi_i + asin(c_i sin phi_i / a_i)) / 2.
  double as[62], bs[62], cs[62];
  as[0] = 1.0;
  bs[0] = std::sqrt(1.0 - k * k);
  cs[0] = k;
  int N = 0;
  while (N < 60 && std::abs(cs[N]) > 1e-15) {
    as[N + 1] = 0.5 * (as[N] + bs[N]);
    bs[N + 1] = std::sqrt(as[N] * bs[N]);
    cs[N + 1] = 0.5 * (as[N] - bs[N]);
    ++N;
  }
  double phi = std::ldexp(as[N] * u, N);  // 2^N a_N u
  double phi_next = phi;
  for (int i = N; i >= 1; --i) {
    double s = cs[i] * std::sin(phi) / as[i];
    s = std::min(1.0, std::max(-1.0, s));
    phi_next = phi;
    phi = 0.5 * (phi + std::asin(s));
  }
  const double cn = std::cos(phi);
  const double den = std::cos(phi_next - phi);
  return JacobiCnDn{cn, std::abs(den) > 1e-300 ? cn / den : 1.0};
}

JacobiParams jacobi_params(double k, double h) {
  if (!(k > 0.0 && k < 1.0))
    fail(errc::parameter, "modulus must lie in (0, 1): k = 0 collapses the width");
  if (!(h > 0.0)) fail(errc::parameter, "height must be positive");
  JacobiParams p;
  p.k = k;
  p.h = h;
  p.K = agm_complete_K(k);
  p.E = agm_complete_E(k);
  const double k2 = k * k;
  p.eta = (h / k2) * (p.E / p.K - 1.0 + k2);
  p.c = (2.0 * h / k2) * (2.0 - k2 - 3.0 * p.E / p.K);
  p.width = std::sqrt(h / (2.0 * k2));
  p.period = 2.0 * p.K / p.width;
  return p;
}

double profile_jacobi(double k, double h, double t, double x) {
  const JacobiParams p = jacobi_params(k, h);
  const double cn = jacobi_cn_dn(p.width * (x - p.c * t), k).cn;
  return p.eta - h * cn * cn;
}

HkTravelingWave hk_traveling_wave(const Lattice& lat, double kappa) {
  HkTravelingWave tw;
  tw.kappa = kappa;
  tw.bp = solve_b(kappa, lat);
  const cplx zb(tw.bp.b, 0.0);
  const double wpb = wp(zb, lat).real();
  const double wppb = wp_prime(zb, lat).real();
  if (!(wppb < 0.0)) fail(errc::consistency, "wp' must be negative on (0, omega1)");
  tw.nu = 8.0 * std::pow(kappa, 5) / wppb + 4.0 * kappa * kappa;
  tw.c1 = (wpb + lat.e1 / 2.0) / (-wppb);
  tw.c2 = 1.0 / (2.0 * wppb);
  return tw;
}

ClosedFormPoint floquet_closed_form(const Lattice& lat, double kappa, double x) {
  const BranchPoint bp = solve_b(kappa, lat);
  const cplx zb(bp.b, 0.0);
  const cplx zx(x, lat.omega3_im);  // x + omega3
  const double wppb = wp_prime(zb, lat).real();
  const double amp = 1.0 / std::sqrt(-wppb);
  const cplx zeta_b = zeta_fn(zb, lat);
  const cplx sig_x = sigma_fn(zx, lat);
  const cplx sig_b = sigma_fn(zb, lat);

  auto branch = [&](double sgn) {
    // psi = sgn * amp * sigma(x + omega3 + sgn b)/(sigma(x + omega3) sigma(sgn b))
    //       * exp(-sgn zeta(b) x).  The sigma quotient carries the constant
    //       phase exp(sgn eta3 b) (eta3 purely imaginary here); dividing it
    //       out picks the real representative of the scaling freedom and
    //       cancels between the branches, leaving g and the Wronskian alone.
    const cplx num = sigma_fn(zx + sgn * zb, lat);
    const cplx val = sgn * amp * num / (sig_x * (sgn > 0 ? sig_b : -sig_b)) *
                     std::exp(-sgn * zeta_b * x) *
                     std::exp(-sgn * cplx(0.0, lat.eta3_im) * bp.b);
    const cplx logd = zeta_fn(zx + sgn * zb, lat) - zeta_fn(zx, lat) - sgn * zeta_b;
    return std::pair<cplx, cplx>(val, val * logd);
  };
  auto [pp, dpp] = branch(+1.0);
  auto [pm, dpm] = branch(-1.0);
  const double scale = std::max({std::abs(pp), std::abs(pm), 1e-300});
  const double dscale = std::max({std::abs(dpp), std::abs(dpm), 1e-300});
  if (std::abs(pp.imag()) > 1e-8 * scale || std::abs(pm.imag()) > 1e-8 * scale ||
      std::abs(dpp.imag()) > 1e-8 * dscale || std::abs(dpm.imag()) > 1e-8 * dscale)
    fail(errc::consistency, "closed-form eigenfunctions have an imaginary residue");
  return ClosedFormPoint{pp.real(), pm.real(), dpp.real(), dpm.real()};
}

}  // namespace kdv
