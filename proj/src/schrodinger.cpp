#include "kdvlab/schrodinger.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "kdvlab/spectral.hpp"

namespace kdv {
namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 matmul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

constexpr int kSeq[] = {2, 4, 6, 8, 10, 12};
constexpr int kLevels = 6;

// Extrapolated-midpoint machinery for the first-order system
//   (psi, psi')' = A(x) (psi, psi'),  A = [[0,1],[w,0]],  w = q + kappa^2.
// Stage potentials are trigonometric refinements of q, one array per level,
// with the wrap sample appended so index base+k is always valid.
struct HillStages {
  double L = 0.0;
  int m = 0;  // macro steps
  std::vector<std::vector<double>> w;

  HillStages(const Field& q, double kappa) {
    const PeriodicGrid& g = q.grid();
    L = g.period;
    const double ratio = 8.0 * kappa * L / g.n;
    m = g.n * std::max(2, static_cast<int>(std::ceil(ratio)));
    w.resize(kLevels);
    for (int li = 0; li < kLevels; ++li) {
      const int fine = kSeq[li] * m;
      std::vector<double> qs = refine_samples(q.spectrum(), fine);
      std::vector<double>& wl = w[li];
      wl.resize(static_cast<size_t>(fine) + 1);
      for (int i = 0; i < fine; ++i) wl[static_cast<size_t>(i)] = qs[static_cast<size_t>(i)] + kappa * kappa;
      wl[static_cast<size_t>(fine)] = wl[0];
    }
  }

  // Transfer matrix across macro step s (x_s -> x_{s+1}), or its inverse
  // direction (x_{s+1} -> x_s) when backward.
  Mat2 step(int s, bool backward) const {
    Mat2 tab[kLevels];
    const double H = L / m;
    for (int li = 0; li < kLevels; ++li) {
      const int k = kSeq[li];
      const std::vector<double>& wl = w[li];
      const double h = H / k;
      const int base = s * k;
      auto apply = [&](int idx, const Mat2& z) {
        // A(x_idx) * z for A = [[0,1],[w,0]]
        Mat2 r;
        r[0][0] = z[1][0];
        r[0][1] = z[1][1];
        r[1][0] = wl[static_cast<size_t>(idx)] * z[0][0];
        r[1][1] = wl[static_cast<size_t>(idx)] * z[0][1];
        return r;
      };
      const double hd = backward ? -h : h;
      auto at = [&](int j) { return backward ? base + k - j : base + j; };
      Mat2 z0{{{1.0, 0.0}, {0.0, 1.0}}};
      Mat2 a0 = apply(at(0), z0);
      Mat2 z1;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) z1[i][j] = z0[i][j] + hd * a0[i][j];
      Mat2 zm1 = z0, zc = z1;
      for (int jj = 1; jj < k; ++jj) {
        Mat2 az = apply(at(jj), zc);
        Mat2 z2;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) z2[i][j] = zm1[i][j] + 2.0 * hd * az[i][j];
        zm1 = zc;
        zc = z2;
      }
      Mat2 ae = apply(at(k), zc);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tab[li][i][j] = 0.5 * (zm1[i][j] + zc[i][j] + hd * ae[i][j]);
    }
    // Neville extrapolation in h^2.
    for (int col = 1; col < kLevels; ++col) {
      for (int i = kLevels - 1; i >= col; --i) {
        const double num = static_cast<double>(kSeq[i]) / kSeq[i - col];
        const double den = num * num - 1.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            tab[i][a][b] += (tab[i][a][b] - tab[i - 1][a][b]) / den;
      }
    }
    return tab[kLevels - 1];
  }
};

struct Vec2 {
  double v[2];
};

Vec2 matvec(const Mat2& a, const Vec2& x) {
  return Vec2{{a[0][0] * x.v[0] + a[0][1] * x.v[1], a[1][0] * x.v[0] + a[1][1] * x.v[1]}};
}

}  // namespace

double Monodromy::trace() const { return std::exp(log_scale) * (mat[0][0] + mat[1][1]); }

double Monodromy::det() const {
  return std::exp(2.0 * log_scale) * (mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]);
}

double Monodromy::log_trace() const {
  const double t = mat[0][0] + mat[1][1];
  return std::log(std::abs(t)) + log_scale;
}

bool Monodromy::hyperbolic() const {
  const double t = mat[0][0] + mat[1][1];
  if (t <= 0.0) return false;
  return std::log(t) + log_scale > std::log(2.0);
}

Monodromy monodromy(const Field& q, double kappa) {
  if (!(kappa > 0.0)) fail(errc::parameter, "kappa must be positive");
  HillStages stages(q, kappa);
  Monodromy out;
  out.mat = {{{1.0, 0.0}, {0.0, 1.0}}};
  for (int s = 0; s < stages.m; ++s) {
    out.mat = matmul(stages.step(s, false), out.mat);
    double big = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) big = std::max(big, std::abs(out.mat[i][j]));
    if (big > 1e100) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.mat[i][j] /= big;
      out.log_scale += std::log(big);
    }
  }
  if (!out.hyperbolic())
    fail(errc::spectral_band, "transfer-matrix trace <= 2: -kappa^2 is not below the spectrum");
  return out;
}

FloquetPair floquet_pair(const Field& q, double kappa) {
  if (!(kappa > 0.0)) fail(errc::parameter, "kappa must be positive");
  const PeriodicGrid& g = q.grid();
  const int n = g.n;
  HillStages stages(q, kappa);
  const int m = stages.m;
  const int stride = m / n;

  // Forward pass: psi- along the growing direction, recorded at grid nodes.
  std::vector<Mat2> recs(static_cast<size_t>(m) + 1);
  Mat2 Y{{{1.0, 0.0}, {0.0, 1.0}}};
  recs[0] = Y;
  for (int s = 0; s < m; ++s) {
    Y = matmul(stages.step(s, false), Y);
    recs[static_cast<size_t>(s) + 1] = Y;
  }
  const double tr = Y[0][0] + Y[1][1];
  if (!(tr > 2.0))
    fail(errc::spectral_band, "transfer-matrix trace <= 2: -kappa^2 is not below the spectrum");
  const double disc = std::sqrt(tr * tr - 4.0);
  const double lam_big = (tr + disc) / 2.0;
  const double rho = 2.0 / (tr + disc);

  auto eigvec = [&](double lam) {
    Vec2 v1{{Y[0][1], lam - Y[0][0]}};
    Vec2 v2{{lam - Y[1][1], Y[1][0]}};
    const double n1 = std::hypot(v1.v[0], v1.v[1]);
    const double n2 = std::hypot(v2.v[0], v2.v[1]);
    Vec2 v = n1 >= n2 ? v1 : v2;
    const double nn = std::max(n1, n2);
    if (!(nn > 0.0)) fail(errc::consistency, "degenerate transfer-matrix eigenvector");
    v.v[0] /= nn;
    v.v[1] /= nn;
    if (v.v[0] < 0.0) {
      v.v[0] = -v.v[0];
      v.v[1] = -v.v[1];
    }
    return v;
  };
  const Vec2 vg = eigvec(lam_big);  // growing direction -> psi-
  const Vec2 vd = eigvec(rho);      // decaying direction -> psi+

  std::vector<Vec2> psim(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) psim[static_cast<size_t>(j)] = matvec(recs[static_cast<size_t>(j) * stride], vg);

  // Backward pass for psi+ (growing in the direction of integration, so the
  // recursion is stable): start from psi+(L) = rho * vd.
  std::vector<Vec2> psip(static_cast<size_t>(n) + 1);
  Vec2 Z{{rho * vd.v[0], rho * vd.v[1]}};
  psip[static_cast<size_t>(n)] = Z;
  for (int s = m - 1; s >= 0; --s) {
    Z = matvec(stages.step(s, true), Z);
    if (s % stride == 0) psip[static_cast<size_t>(s / stride)] = Z;
  }

  // Symmetric split of the scaling freedom: after normalization the
  // Wronskian is 1 and psi+(0) = psi-(0).
  const double W = psip[0].v[0] * psim[0].v[1] - psip[0].v[1] * psim[0].v[0];
  if (!(std::abs(W) > 0.0)) fail(errc::consistency, "vanishing Wronskian");
  const double a = std::sqrt(std::abs(psim[0].v[0] / (psip[0].v[0] * W)));
  const double b = std::sqrt(std::abs(psip[0].v[0] / (psim[0].v[0] * W)));
  for (int j = 0; j <= n; ++j) {
    psip[static_cast<size_t>(j)].v[0] *= a;
    psip[static_cast<size_t>(j)].v[1] *= a;
    psim[static_cast<size_t>(j)].v[0] *= b;
    psim[static_cast<size_t>(j)].v[1] *= b;
  }
  double wdev = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double wj = psip[static_cast<size_t>(j)].v[0] * psim[static_cast<size_t>(j)].v[1] -
                      psip[static_cast<size_t>(j)].v[1] * psim[static_cast<size_t>(j)].v[0];
    wdev = std::max(wdev, std::abs(wj - 1.0));
  }
  if (wdev > 1e-3) fail(errc::consistency, "Wronskian is not uniform across the period");

  std::vector<double> sp(static_cast<size_t>(n)), sm(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    sp[static_cast<size_t>(j)] = psip[static_cast<size_t>(j)].v[0];
    sm[static_cast<size_t>(j)] = psim[static_cast<size_t>(j)].v[0];
  }
  FloquetPair out{Field::from_samples(g, std::move(sp)), Field::from_samples(g, std::move(sm)),
                  rho,
                  psip[0].v[0] * psim[0].v[1] - psip[0].v[1] * psim[0].v[0]};
  return out;
}

GreenDiag diagonal_green(const Field& q, double kappa) {
  FloquetPair fp = floquet_pair(q, kappa);
  std::vector<double> gs(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j) gs[static_cast<size_t>(j)] = fp.psi_plus.value(j) * fp.psi_minus.value(j);
  return GreenDiag{Field::from_samples(q.grid(), std::move(gs)), kappa, GreenMethod::floquet};
}

GreenDiag diagonal_green_nullspace(const Field& q, double kappa) {
  if (!(kappa > 0.0)) fail(errc::parameter, "kappa must be positive");
  const PeriodicGrid& g = q.grid();
  const int n = g.n;
  const int K = n / 2 - 1;
  const int dim = 2 * K + 1;
  const double twopi_L = 2.0 * PeriodicGrid::pi() / g.period;

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ia = 0; ia < dim; ++ia) {
    const int ma = ia - K;
    const double xa = twopi_L * ma;
    A(ia, ia) = cplx(0.0, -(xa * xa * xa) - 4.0 * kappa * kappa * xa);
    for (int ib = 0; ib < dim; ++ib) {
      const int dk = ma - (ib - K);
      if (std::abs(dk) > n / 2) continue;  // dk = 0 carries the potential mean
      const double xb = twopi_L * (ib - K);
      A(ia, ib) += cplx(0.0, -2.0 * (xa + xb)) * q.coeff_of_mode(dk);
    }
  }
  // Invertible diagonal row scaling: kernel unchanged, matrix norm O(xi)
  // instead of O(xi^3), so the kernel direction survives in double precision.
  for (int ia = 0; ia < dim; ++ia) {
    const double xa = twopi_L * (ia - K);
    A.row(ia) *= 1.0 / (xa * xa + 4.0 * kappa * kappa);
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(dim - 2) < 1e-6 * sv(0))
    fail(errc::degenerate_kernel, "second singular value collapsed: kernel is not one-dimensional");
  Eigen::VectorXcd v = svd.matrixV().col(dim - 1);

  // Phase-fix on the dominant coefficient, then enforce Hermitian symmetry.
  int imax = 0;
  for (int i = 1; i < dim; ++i)
    if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
  const cplx ph = std::conj(v(imax)) / std::abs(v(imax));
  v *= ph;

  std::vector<cplx> spec(static_cast<size_t>(n), cplx(0.0, 0.0));
  spec[0] = cplx(v(K).real(), 0.0);
  for (int mmode = 1; mmode <= K; ++mmode) {
    const cplx avg = 0.5 * (v(K + mmode) + std::conj(v(K - mmode)));
    spec[static_cast<size_t>(g.bin_of_mode(mmode))] = avg;
    spec[static_cast<size_t>(g.bin_of_mode(-mmode))] = std::conj(avg);
  }
  Field u = Field::from_spectrum(g, std::move(spec));
  if (u.mean() < 0.0) {
    std::vector<double> neg(u.samples());
    for (double& x : neg) x = -x;
    u = Field::from_samples(g, std::move(neg));
  }

  // Scale from the product identity g g'' - (g')^2/2 - 2 (q + kappa^2) g^2 = -1/2.
  Field u1 = derivative(u, 1);
  Field u2 = derivative(u, 2);
  double brmean = 0.0;
  for (int j = 0; j < n; ++j) {
    const double uu = u.value(j);
    brmean += uu * u2.value(j) - 0.5 * u1.value(j) * u1.value(j) -
              2.0 * (q.value(j) + kappa * kappa) * uu * uu;
  }
  brmean /= n;
  // Sign of the bracket separates the regimes: below the spectrum the kernel
  // element is the Green diagonal (bracket < 0); inside a band it is the
  // oscillatory product |psi|^2 and the bracket comes out positive.
  if (brmean > 0.0)
    fail(errc::spectral_band, "product identity has oscillatory sign: -kappa^2 is not below the spectrum");
  if (!(brmean < 0.0))
    fail(errc::consistency, "kernel vector violates the product identity");
  const double s = std::sqrt(-0.5 / brmean);
  std::vector<double> gs(u.samples());
  for (double& x : gs) x *= s;
  return GreenDiag{Field::from_samples(g, std::move(gs)), kappa, GreenMethod::nullspace};
}

AlphaValue alpha(const Field& q, double kappa) {
  return alpha_given_green(q, diagonal_green(q, kappa));
}

AlphaValue alpha_given_green(const Field& q, const GreenDiag& gd) {
  const PeriodicGrid& g = q.grid();
  if (gd.g.grid() != g) fail(errc::invalid_input, "grid mismatch");
  const double kappa = gd.kappa;
  double mg = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double gj = gd.g.value(j);
    if (!(gj > 0.0)) fail(errc::precondition, "diagonal Green function must be positive");
    mg += -1.0 / (2.0 * gj);
  }
  mg /= g.n;
  const double q0 = q.mean();
  return AlphaValue{g.period * (mg + kappa + q0 / (2.0 * kappa)), kappa, true};
}

Field recover_potential(const GreenDiag& gd) {
  const Field& g = gd.g;
  const PeriodicGrid& grid = g.grid();
  const double kappa = gd.kappa;
  Field gp = derivative(g, 1);
  std::vector<double> us(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    if (!(g.value(j) > 0.0)) fail(errc::precondition, "diagonal Green function must be positive");
    us[static_cast<size_t>(j)] = gp.value(j) / (2.0 * g.value(j));
  }
  Field u = Field::from_samples(grid, std::move(us));
  Field up = derivative(u, 1);
  std::vector<double> qs(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double gj = g.value(j);
    qs[static_cast<size_t>(j)] = up.value(j) + u.value(j) * u.value(j) +
                                 1.0 / (4.0 * gj * gj) - kappa * kappa;
  }
  return Field::from_samples(grid, std::move(qs));
}

Field antiderivative_F(const Field& q, const GreenDiag& gd) {
  if (q.grid() != gd.g.grid()) fail(errc::invalid_input, "grid mismatch");
  const Field& g = gd.g;
  const double kappa = gd.kappa;
  Field gp = derivative(g, 1);
  std::vector<double> fs(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j) {
    const double gj = g.value(j);
    if (!(gj > 0.0)) fail(errc::precondition, "diagonal Green function must be positive");
    const double dev = gj - 1.0 / (2.0 * kappa);
    fs[static_cast<size_t>(j)] = (0.25 * gp.value(j) * gp.value(j) - kappa * kappa * dev * dev) / gj;
  }
  return Field::from_samples(q.grid(), std::move(fs));
}

double commutativity_integral(const Field& q, double kappa, double vkappa) {
  GreenDiag gk = diagonal_green(q, kappa);
  GreenDiag gv = diagonal_green(q, vkappa);
  Field gkp = derivative(gk.g, 1);
  double acc = 0.0;
  for (int j = 0; j < q.grid().n; ++j) acc += gv.g.value(j) * gkp.value(j);
  return q.grid().period * acc / q.grid().n;
}

}  // namespace kdv
