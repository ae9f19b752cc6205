#include "support/oracles.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "kdvlab/errors.hpp"

namespace oracle {

BruteWeierstrass brute_weierstrass(cplx z, double omega1, double omega3_im,
                                   int radius) {
  const cplx w1(2.0 * omega1, 0.0);
  const cplx w2(0.0, 2.0 * omega3_im);
  cplx p = 1.0 / (z * z);
  cplx pp = -2.0 / (z * z * z);
  cplx zeta = 1.0 / z;
  cplx log_sigma = std::log(z);
  for (int m = -radius; m <= radius; ++m) {
    for (int n = -radius; n <= radius; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = double(m) * w1 + double(n) * w2;
      const cplx d = z - w;
      p += 1.0 / (d * d) - 1.0 / (w * w);
      pp += -2.0 / (d * d * d);
      zeta += 1.0 / d + 1.0 / w + z / (w * w);
      // log(1 - z/w) + z/w + z^2/(2 w^2), summed in log form so the sigma
      // product never under/overflows.
      log_sigma += std::log(1.0 - z / w) + z / w + z * z / (2.0 * w * w);
    }
  }
  return {p, pp, zeta, std::exp(log_sigma)};
}

namespace {

// Composite Simpson over [0, pi/2].
double simpson_half_pi(const std::function<double(double)>& f, int panels) {
  const double h = std::acos(-1.0) / 2.0 / panels;
  double acc = f(0.0) + f(panels * h);
  for (int j = 1; j < panels; ++j) acc += (j % 2 ? 4.0 : 2.0) * f(j * h);
  return acc * h / 3.0;
}

}  // namespace

double quad_complete_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) kdv::fail(kdv::errc::parameter, "modulus outside [0,1)");
  return simpson_half_pi(
      [k](double th) {
        const double s = std::sin(th);
        return 1.0 / std::sqrt(1.0 - k * k * s * s);
      },
      2048);
}

double quad_complete_E(double k) {
  if (!(k >= 0.0 && k < 1.0)) kdv::fail(kdv::errc::parameter, "modulus outside [0,1)");
  return simpson_half_pi(
      [k](double th) {
        const double s = std::sin(th);
        return std::sqrt(1.0 - k * k * s * s);
      },
      2048);
}

double ode_jacobi_cn(double u, double k) {
  const int steps = 4000 + int(2000.0 * std::abs(u));
  const double h = u / steps;
  double sn = 0.0, cn = 1.0, dn = 1.0;
  auto f = [k](const double y[3], double dy[3]) {
    dy[0] = y[1] * y[2];
    dy[1] = -y[0] * y[2];
    dy[2] = -k * k * y[0] * y[1];
  };
  double y[3] = {sn, cn, dn};
  for (int s = 0; s < steps; ++s) {
    double k1[3], k2[3], k3[3], k4[3], t[3];
    f(y, k1);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    f(t, k2);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    f(t, k3);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + h * k3[i];
    f(t, k4);
    for (int i = 0; i < 3; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y[1];
}

namespace {

// One tridiagonal Dirichlet solve of (-D2 + q + kappa^2) x = e_mid/h on a
// mesh of `total` interior points; returns x at the requested indices.
// Thomas elimination; the matrix is strictly diagonally dominant.
std::vector<double> thomas_green(const std::vector<double>& pot, double h,
                                 const std::vector<int>& at) {
  const int N = int(pot.size());
  std::vector<double> diag(N), rhs(N, 0.0);
  const double off = -1.0 / (h * h);
  for (int j = 0; j < N; ++j) diag[j] = 2.0 / (h * h) + pot[j];
  std::vector<double> out;
  out.reserve(at.size());
  // One factorization per right-hand side keeps this simple; the cost is
  // O(N) per solve, well under a millisecond at desk sizes.
  std::vector<double> c(N), d(N);
  for (int idx : at) {
    for (int j = 0; j < N; ++j) {
      rhs[j] = 0.0;
      d[j] = 0.0;
      c[j] = 0.0;
    }
    rhs[idx] = 1.0 / h;
    c[0] = off / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int j = 1; j < N; ++j) {
      const double m = diag[j] - off * c[j - 1];
      c[j] = off / m;
      d[j] = (rhs[j] - off * d[j - 1]) / m;
    }
    double x = d[N - 1];
    double val = (idx == N - 1) ? x : 0.0;
    for (int j = N - 2; j >= 0; --j) {
      x = d[j] - c[j] * x;
      if (j == idx) val = x;
    }
    out.push_back(val);
  }
  return out;
}

// Green diagonal at the middle-copy grid nodes for one mesh refinement.
std::vector<double> fd_green_once(const kdv::Field& q, double kappa,
                                  int copies, int refine) {
  const kdv::PeriodicGrid& g = q.grid();
  const int n = g.n;
  const double L = g.period;
  const int per_copy = n * refine;
  const int total = copies * per_copy - 1;  // interior points, ends clamped
  const double h = L / per_copy;
  // Potential on the fine mesh by direct Fourier synthesis from q's
  // coefficients (the input data, not the code paths under test).
  std::vector<double> pot(total);
  const auto& spec = q.spectrum();
  for (int j = 0; j < total; ++j) {
    const double x = (j + 1) * h;
    double v = spec[0].real();
    for (int m = 1; m < n / 2; ++m) {
      const cplx c = spec[size_t(g.bin_of_mode(m))];
      const double ph = 2.0 * kdv::PeriodicGrid::pi() * m * x / L;
      v += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
    }
    const cplx cn = spec[size_t(n / 2)];
    v += cn.real() * std::cos(kdv::PeriodicGrid::pi() * n * x / L);
    pot[j] = v + kappa * kappa;
  }
  const int mid = copies / 2;
  std::vector<int> at(n);
  for (int j = 0; j < n; ++j) at[j] = mid * per_copy + j * refine - 1;
  return thomas_green(pot, h, at);
}

}  // namespace

std::vector<double> fd_green_diagonal(const kdv::Field& q, double kappa,
                                      int copies, int refine) {
  std::vector<double> coarse = fd_green_once(q, kappa, copies, refine);
  std::vector<double> fine = fd_green_once(q, kappa, copies, 2 * refine);
  for (size_t j = 0; j < coarse.size(); ++j)
    coarse[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
  return coarse;
}

kdv::Field random_field(const kdv::PeriodicGrid& g, std::uint64_t seed,
                        int max_mode, bool zero_mean, double amplitude) {
  std::mt19937_64 eng(seed);
  auto uni = [&eng]() { return std::ldexp(double(eng() >> 11), -53); };
  std::vector<cplx> spec(size_t(g.n), cplx(0.0, 0.0));
  if (!zero_mean) spec[0] = cplx(0.5 * (uni() - 0.5), 0.0);
  const int top = std::min(max_mode, g.n / 2 - 1);
  for (int m = 1; m <= top; ++m) {
    const double mag = (uni() + 0.1) / (1.0 + double(m) * double(m));
    const double ph = 2.0 * kdv::PeriodicGrid::pi() * uni();
    const cplx c = mag * cplx(std::cos(ph), std::sin(ph));
    spec[size_t(g.bin_of_mode(m))] = c;
    spec[size_t(g.bin_of_mode(-m))] = std::conj(c);
  }
  kdv::Field f = kdv::Field::from_spectrum(g, std::move(spec));
  const double s = f.sup_norm();
  if (s == 0.0) return f;
  std::vector<double> scaled(f.samples());
  for (double& v : scaled) v *= amplitude / s;
  return kdv::Field::from_samples(g, std::move(scaled));
}

double sup_diff(const kdv::Field& a, const kdv::Field& b) {
  double d = 0.0;
  for (int j = 0; j < a.grid().n; ++j)
    d = std::max(d, std::abs(a.value(j) - b.value(j)));
  return d;
}

}  // namespace oracle
