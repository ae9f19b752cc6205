#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "kdvlab/elliptic.hpp"
#include "support/oracles.hpp"

using namespace kdv;

namespace {

// Points inside the fundamental cell, kept a fixed distance from the lattice
// points and cell edges so every function is well conditioned.
cplx cell_point(std::uint64_t seed, double omega1, double omega3_im) {
  std::mt19937_64 eng(seed);
  auto uni = [&eng]() { return std::ldexp(double(eng() >> 11), -53); };
  const double x = (0.15 + 0.7 * uni()) * 2.0 * omega1 - omega1;
  const double y = (0.15 + 0.7 * uni()) * 2.0 * omega3_im - omega3_im;
  cplx z(x, y);
  if (std::abs(z) < 0.2) z += cplx(0.25, 0.2);
  return z;
}

}  // namespace

TEST_CASE("square-lattice invariants match their closed forms") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  CHECK(lat.e1 == doctest::Approx(oracle::kSquareE1).epsilon(1e-13));
  CHECK(lat.g2 == doctest::Approx(oracle::kSquareG2).epsilon(1e-13));
  CHECK(std::abs(lat.g3) <= 1e-13 * lat.g2);
  CHECK(lat.eta1 == doctest::Approx(oracle::kSquareEta1).epsilon(1e-13));
  // Legendre relation on a rectangular lattice:
  // omega3_im * eta1 - eta3_im * omega1 = pi/2.
  const double legendre = lat.omega3_im * lat.eta1 - lat.eta3_im * lat.omega1;
  CHECK(legendre == doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("invariant row sums are already converged at the default depth") {
  for (auto [o1, o3] : {std::pair{1.0, 1.0}, {0.8, 1.3}, {1.4, 0.9}}) {
    Invariants a = lattice_invariants(o1, o3, 200);
    Invariants b = lattice_invariants(o1, o3, 400);
    CHECK(std::abs(a.g2 - b.g2) <= 1e-13 * std::abs(b.g2));
    CHECK(std::abs(a.g3 - b.g3) <= 1e-13 * (std::abs(b.g3) + std::abs(b.g2)));
    CHECK(std::abs(a.e1 - b.e1) <= 1e-13 * std::abs(b.e1));
  }
}

TEST_CASE("function bundle agrees with the truncated lattice sums") {
  for (auto [o1, o3] : {std::pair{1.0, 1.0}, {0.8, 1.2}}) {
    Lattice lat = Lattice::rectangular(o1, o3);
    for (int t = 0; t < 12; ++t) {
      const cplx z = cell_point(900 + t, o1, o3);
      auto brute = oracle::brute_weierstrass(z, o1, o3, 160);
      auto fast = weierstrass_bundle(z, lat);
      // truncation error of the sums is absolute, O(radius^-2)
      const double tol = 2e-6 * (1.0 + std::abs(z) * std::abs(z));
      CHECK(std::abs(fast.wp - brute.wp) <= tol * (1.0 + std::abs(brute.wp)));
      CHECK(std::abs(fast.wp_prime - brute.wp_prime) <=
            tol * (1.0 + std::abs(brute.wp_prime)));
      CHECK(std::abs(fast.zeta - brute.zeta) <= tol * (1.0 + std::abs(brute.zeta)));
      CHECK(std::abs(fast.sigma - brute.sigma) <= tol * (1.0 + std::abs(brute.sigma)));
    }
  }
}

TEST_CASE("wp satisfies its differential equation") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const cplx z = cell_point(100 + t, 1.0, 1.0);
    WeierstrassBundle b = weierstrass_bundle(z, lat);
    const cplx lhs = b.wp_prime * b.wp_prime;
    const cplx rhs = 4.0 * b.wp * b.wp * b.wp - lat.g2 * b.wp - lat.g3;
    const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
    CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
  }
}

TEST_CASE("central differences reproduce the derivative triple at order two") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  const cplx z(0.43, 0.31);
  auto order_of = [&](auto&& value, auto&& deriv) {
    double err[2];
    for (int r = 0; r < 2; ++r) {
      const double h = 1e-3 / (r + 1.0) / (r + 1.0);  // h, h/4
      const cplx fd = (value(z + cplx(h, 0.0)) - value(z - cplx(h, 0.0))) / (2.0 * h);
      err[r] = std::abs(fd - deriv(z));
    }
    return std::log(err[0] / err[1]) / std::log(4.0);  // observed order in h
  };
  // wp' from wp
  double ord = order_of([&](cplx w) { return wp(w, lat); },
                        [&](cplx w) { return wp_prime(w, lat); });
  CHECK(ord > 1.6);
  // wp = -zeta'
  ord = order_of([&](cplx w) { return zeta_fn(w, lat); },
                 [&](cplx w) { return -wp(w, lat); });
  CHECK(ord > 1.6);
  // zeta = sigma'/sigma
  ord = order_of([&](cplx w) { return std::log(sigma_fn(w, lat)); },
                 [&](cplx w) { return zeta_fn(w, lat); });
  CHECK(ord > 1.6);
}

TEST_CASE("wp is doubly periodic") {
  for (auto [o1, o3] : {std::pair{1.0, 1.0}, {0.7, 1.4}}) {
    Lattice lat = Lattice::rectangular(o1, o3);
    for (int t = 0; t < 25; ++t) {
      const cplx z = cell_point(300 + t, o1, o3);
      const cplx p = wp(z, lat);
      CHECK(std::abs(wp(z + 2.0 * o1, lat) - p) <= 1e-10 * (std::abs(p) + 1.0));
      CHECK(std::abs(wp(z + cplx(0.0, 2.0 * o3), lat) - p) <=
            1e-10 * (std::abs(p) + 1.0));
    }
  }
}

TEST_CASE("zeta and sigma pick up their quasi-period factors") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    const cplx z = cell_point(400 + t, 1.0, 1.0);
    // zeta(z + 2 omega1) = zeta(z) + 2 eta1
    const cplx dz = zeta_fn(z + 2.0 * lat.omega1, lat) - zeta_fn(z, lat);
    CHECK(std::abs(dz - 2.0 * lat.eta1) <= 1e-10);
    // sigma(z + 2 omega1) = -exp(2 eta1 (z + omega1)) sigma(z)
    const cplx ls = sigma_fn(z + 2.0 * lat.omega1, lat);
    const cplx rs = -std::exp(2.0 * lat.eta1 * (z + lat.omega1)) * sigma_fn(z, lat);
    CHECK(std::abs(ls - rs) <= 1e-10 * (std::abs(rs) + 1.0));
  }
}

TEST_CASE("duplication is consistent with direct evaluation") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    cplx z = cell_point(500 + t, 1.0, 1.0);
    z *= 0.4;  // keep 2z inside the cell and off the lattice
    WeierstrassBundle b = weierstrass_bundle(z, lat);
    const cplx second = 6.0 * b.wp * b.wp - lat.g2 / 2.0;  // wp'' from the DE
    // wp(2z) = (wp''/(2 wp'))^2 - 2 wp(z)
    const cplx half_ratio = second / (2.0 * b.wp_prime);
    const cplx dup = half_ratio * half_ratio - 2.0 * b.wp;
    const cplx direct = wp(2.0 * z, lat);
    CHECK(std::abs(dup - direct) <= 1e-9 * (std::abs(direct) + 1.0));
  }
}

TEST_CASE("evaluation near a lattice point is refused") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  CHECK_THROWS_AS(wp(cplx(1e-8, 0.0), lat), const error&);
  CHECK_THROWS_AS(wp(cplx(2.0 + 1e-8, 0.0), lat), const error&);
  // sigma is entire: fine arbitrarily close to the lattice
  CHECK(std::abs(sigma_fn(cplx(1e-8, 0.0), lat)) <= 2e-8);
}

TEST_CASE("real axis values are real and conjugation commutes") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  const cplx z(0.37, 0.18);
  CHECK(std::abs(wp(std::conj(z), lat) - std::conj(wp(z, lat))) <= 1e-12);
  CHECK(std::abs(wp(cplx(0.41, 0.0), lat).imag()) <= 1e-12);
  CHECK(std::abs(zeta_fn(cplx(0.41, 0.0), lat).imag()) <= 1e-12);
}

TEST_CASE("branch solve hits its defining equation across lattices and energies") {
  for (auto [o1, o3] : {std::pair{1.0, 1.0}, {0.75, 1.25}, {1.3, 0.85}}) {
    Lattice lat = Lattice::rectangular(o1, o3);
    for (double kap : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
      BranchPoint bp = solve_b(kap, lat);
      CHECK(bp.b > 0.0);
      CHECK(bp.b < lat.omega1);
      const double got = wp(cplx(bp.b, 0.0), lat).real() - lat.e1;
      CHECK(got == doctest::Approx(kap * kap).epsilon(1e-10));
    }
  }
}

TEST_CASE("branch solve refuses an unattainable energy") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  CHECK_THROWS_AS(solve_b(0.0, lat), const error&);
}

TEST_CASE("large-energy branch behaviour: b ~ 1/kappa with a cubic-order remainder") {
  Lattice lat = Lattice::rectangular(1.0, 1.0);
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double kap = 8.0 * (1 << i);
    const double dev = std::abs(solve_b(kap, lat).b - 1.0 / kap);
    if (i > 0) {
      const double order = std::log2(prev / dev);
      CHECK(order > 2.5);  // observed ~3; recorded, not pinned tighter
      CHECK(order < 3.5);
    }
    prev = dev;
  }
}
