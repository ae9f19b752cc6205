#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "kdvlab/grid.hpp"
#include "kdvlab/spectral.hpp"
#include "support/oracles.hpp"

using namespace kdv;

namespace {
constexpr std::uint64_t kSeed = 0x5eed0001ULL;
}

TEST_CASE("sobolev norm at s=0 is the plain coefficient norm") {
  PeriodicGrid g(128, 2.0);
  for (int t = 0; t < 100; ++t) {
    Field f = oracle::random_field(g, kSeed + t, 40);
    double sum = 0.0;
    for (const cplx& c : f.spectrum()) sum += std::norm(c);
    const double nrm = hs_kappa_norm(f, SobolevIndex{0.0, 3.7});
    CHECK(std::abs(nrm * nrm - sum) <= 1e-12 * sum);
  }
}

TEST_CASE("multiplier composition equals the product symbol") {
  PeriodicGrid g(128, 2.0);
  Symbol m1 = [](double xi) { return cplx(1.0 / (1.0 + xi * xi), 0.0); };
  Symbol m2 = [](double xi) { return cplx(0.0, xi); };
  Symbol m12 = [&](double xi) { return m1(xi) * m2(xi); };
  for (int t = 0; t < 20; ++t) {
    Field f = oracle::random_field(g, kSeed + 100 + t, 50);
    Field two = apply_multiplier(apply_multiplier(f, m1), m2);
    Field one = apply_multiplier(f, m12);
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < g.n; ++k) {
      worst = std::max(worst, std::abs(two.spectrum()[k] - one.spectrum()[k]));
      scale = std::max(scale, std::abs(one.spectrum()[k]));
    }
    CHECK(worst <= 1e-13 * std::max(scale, 1e-30));
  }
}

TEST_CASE("derivative matches the analytic derivative of a trig field") {
  PeriodicGrid g(64, 2.0);
  const double w = 2.0 * PeriodicGrid::pi() / g.period;
  std::vector<double> s(64), ds(64);
  for (int j = 0; j < 64; ++j) {
    const double x = g.node(j);
    s[j] = 0.3 * std::cos(3.0 * w * x) - 1.1 * std::sin(7.0 * w * x);
    ds[j] = -0.9 * w * std::sin(3.0 * w * x) - 7.7 * w * std::cos(7.0 * w * x);
  }
  Field f = Field::from_samples(g, s);
  Field d = derivative(f, 1);
  for (int j = 0; j < 64; ++j) CHECK(d.value(j) == doctest::Approx(ds[j]).epsilon(1e-12));
  // order composition
  Field d3a = derivative(f, 3);
  Field d3b = derivative(derivative(f, 2), 1);
  CHECK(oracle::sup_diff(d3a, d3b) <= 1e-10 * d3a.sup_norm());
}

TEST_CASE("free resolvent acts as 1/(xi^2+k^2) per mode") {
  PeriodicGrid g(64, 2.0);
  const double k = 5.0;
  Field f = oracle::random_field(g, kSeed + 200, 20);
  Field r = r0_apply(f, k);
  for (int bin = 0; bin < g.n; ++bin) {
    const double xi = g.xi(bin);
    const cplx want = f.spectrum()[bin] / (xi * xi + k * k);
    CHECK(std::abs(r.spectrum()[bin] - want) <= 1e-14);
  }
}

TEST_CASE("linear operator identity holds on random band-limited fields") {
  PeriodicGrid g(128, 2.0);
  for (double kap : {2.0, 8.0, 32.0}) {
    for (int t = 0; t < 100; ++t) {
      Field f = oracle::random_field(g, kSeed + 300 + t, g.n / 3, false);
      CHECK(verify_linear_identity(f, kap) <= 1e-10);
    }
  }
}

TEST_CASE("quadratic operator identity holds on random band-limited pairs") {
  PeriodicGrid g(128, 2.0);
  for (double kap : {2.0, 8.0, 32.0}) {
    for (int t = 0; t < 100; ++t) {
      Field f = oracle::random_field(g, kSeed + 400 + 2 * t, g.n / 3 - 1);
      Field h = oracle::random_field(g, kSeed + 401 + 2 * t, g.n / 3 - 1);
      CHECK(verify_quadratic_identity(f, h, kap) <= 1e-10);
    }
  }
}

TEST_CASE("quadratic identity rejects fields outside the dealias band") {
  PeriodicGrid g(128, 2.0);
  std::vector<cplx> spec(128, cplx(0.0, 0.0));
  spec[size_t(g.bin_of_mode(60))] = cplx(0.5, 0.1);
  spec[size_t(g.bin_of_mode(-60))] = cplx(0.5, -0.1);
  Field hot = Field::from_spectrum(g, std::move(spec));
  Field ok = oracle::random_field(g, kSeed + 600, 30);
  CHECK_THROWS_AS(verify_quadratic_identity(hot, ok, 4.0), const error&);
}

TEST_CASE("duality: the pairing is bounded by dual sobolev norms") {
  PeriodicGrid g(128, 2.0);
  for (double kap : {0.5, 2.0, 11.0}) {
    for (int t = 0; t < 100; ++t) {
      Field f = oracle::random_field(g, kSeed + 700 + 2 * t, 40);
      Field h = oracle::random_field(g, kSeed + 701 + 2 * t, 40);
      const double lhs = std::abs(spectral_pairing(f, h));
      const double rhs = hs_kappa_norm(f, SobolevIndex{-1.0, kap}) *
                         hs_kappa_norm(h, SobolevIndex{1.0, kap});
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("pairing of a field with itself is its coefficient energy") {
  PeriodicGrid g(64, 2.0);
  Field f = oracle::random_field(g, kSeed + 800, 20);
  double sum = 0.0;
  for (const cplx& c : f.spectrum()) sum += std::norm(c);
  CHECK(spectral_pairing(f, f) == doctest::Approx(sum).epsilon(1e-13));
}

TEST_CASE("dealiased product equals the direct coefficient convolution") {
  PeriodicGrid g(128, 2.0);
  for (int t = 0; t < 20; ++t) {
    Field a = oracle::random_field(g, kSeed + 900 + 2 * t, 20);
    Field b = oracle::random_field(g, kSeed + 901 + 2 * t, 20);
    Field prod = multiply_dealiased(a, b);
    // direct convolution over the retained band
    for (int m = -40; m <= 40; ++m) {
      cplx want(0.0, 0.0);
      for (int j = -20; j <= 20; ++j) {
        const int l = m - j;
        if (std::abs(l) > 20) continue;
        want += a.coeff_of_mode(j) * b.coeff_of_mode(l);
      }
      CHECK(std::abs(prod.coeff_of_mode(m) - want) <= 1e-13);
    }
  }
}

TEST_CASE("band detector separates band-limited from hot fields") {
  PeriodicGrid g(128, 2.0);
  Field cool = oracle::random_field(g, kSeed + 1000, 30);
  CHECK(within_band23(cool));
  std::vector<cplx> spec(cool.spectrum());
  spec[size_t(g.bin_of_mode(55))] += cplx(0.1, 0.0);
  spec[size_t(g.bin_of_mode(-55))] += cplx(0.1, 0.0);
  Field hot = Field::from_spectrum(g, std::move(spec));
  CHECK_FALSE(within_band23(hot));
  CHECK(within_band23(dealias23(hot)));
}

TEST_CASE("hilbert-schmidt line identity agrees between its two quadratures") {
  auto gauss = [](double x) { return std::exp(-x * x); };
  auto sech2 = [](double x) {
    const double c = std::cosh(2.0 * x);
    return 1.0 / (c * c);
  };
  auto bump = [](double x) { return std::exp(-x * x / 2.0) * (1.0 + 0.3 * std::sin(3.0 * x)); };
  for (double kap : {1.0, 2.0, 5.0}) {
    for (auto& q : {std::function<double(double)>(gauss),
                    std::function<double(double)>(sech2),
                    std::function<double(double)>(bump)}) {
      LinePair lp = hilbert_schmidt_identity_line(q, kap);
      CHECK(std::abs(lp.lhs - lp.rhs) <= 1e-6 * std::abs(lp.rhs));
    }
  }
}

TEST_CASE("line quadrature rejects profiles that do not decay in the window") {
  auto flat = [](double x) { return 1.0 / (1.0 + x * x); };
  CHECK_THROWS_AS(hilbert_schmidt_identity_line(flat, 2.0), const error&);
}
