#include "kdvlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kdv {

double PeriodicGrid::pi() { return std::numbers::pi; }

PeriodicGrid::PeriodicGrid(int n_, double period_) : n(n_), period(period_) {
  if (n < 8 || (n & (n - 1)) != 0)
    fail(errc::parameter, "grid size must be a power of two, at least 8");
  if (!(period > 0.0) || !std::isfinite(period))
    fail(errc::parameter, "grid period must be positive and finite");
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Field Field::from_samples(const PeriodicGrid& g, std::vector<double> samples) {
  if (static_cast<int>(samples.size()) != g.n)
    fail(errc::invalid_input, "sample count does not match grid size");
  if (!all_finite(samples)) fail(errc::invalid_input, "non-finite sample");
  std::vector<cplx> spec = coeffs_of_samples(samples);
  // The complex transform of real data is Hermitian only to roundoff;
  // symmetrize exactly so multiplier chains preserve the invariant bitwise.
  const int n = g.n;
  spec[0] = cplx(spec[0].real(), 0.0);
  spec[static_cast<size_t>(n / 2)] = cplx(spec[static_cast<size_t>(n / 2)].real(), 0.0);
  for (int k = 1; k < n / 2; ++k) {
    cplx avg = 0.5 * (spec[static_cast<size_t>(k)] + std::conj(spec[static_cast<size_t>(n - k)]));
    spec[static_cast<size_t>(k)] = avg;
    spec[static_cast<size_t>(n - k)] = std::conj(avg);
  }
  return Field(g, std::move(samples), std::move(spec));
}

Field Field::from_spectrum(const PeriodicGrid& g, std::vector<cplx> spectrum) {
  const int n = g.n;
  if (static_cast<int>(spectrum.size()) != n)
    fail(errc::invalid_input, "spectrum length does not match grid size");
  double sup = 0.0;
  for (const cplx& c : spectrum) sup = std::max(sup, std::abs(c));
  if (!std::isfinite(sup)) fail(errc::invalid_input, "non-finite coefficient");
  const double tol = 1e-12 * std::max(1.0, sup);
  if (std::abs(spectrum[0].imag()) > tol ||
      std::abs(spectrum[static_cast<size_t>(n / 2)].imag()) > tol)
    fail(errc::symmetry, "zero/Nyquist coefficient not real");
  for (int k = 1; k < n / 2; ++k) {
    if (std::abs(spectrum[static_cast<size_t>(k)] -
                 std::conj(spectrum[static_cast<size_t>(n - k)])) > tol)
      fail(errc::symmetry, "coefficients are not Hermitian-symmetric");
  }
  // Exact symmetrization so samples are real to the last bit.
  spectrum[0] = cplx(spectrum[0].real(), 0.0);
  spectrum[static_cast<size_t>(n / 2)] =
      cplx(spectrum[static_cast<size_t>(n / 2)].real(), 0.0);
  for (int k = 1; k < n / 2; ++k) {
    cplx avg = 0.5 * (spectrum[static_cast<size_t>(k)] +
                      std::conj(spectrum[static_cast<size_t>(n - k)]));
    spectrum[static_cast<size_t>(k)] = avg;
    spectrum[static_cast<size_t>(n - k)] = std::conj(avg);
  }
  std::vector<cplx> tmp = dft_backward(spectrum);
  std::vector<double> samples(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) samples[static_cast<size_t>(j)] = tmp[static_cast<size_t>(j)].real();
  return Field(g, std::move(samples), std::move(spectrum));
}

Field Field::zero(const PeriodicGrid& g) {
  return Field(g, std::vector<double>(static_cast<size_t>(g.n), 0.0),
               std::vector<cplx>(static_cast<size_t>(g.n), cplx(0.0, 0.0)));
}

Field Field::constant(const PeriodicGrid& g, double value) {
  std::vector<cplx> spec(static_cast<size_t>(g.n), cplx(0.0, 0.0));
  spec[0] = value;
  return Field(g, std::vector<double>(static_cast<size_t>(g.n), value), std::move(spec));
}

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Field::rms() const {
  double s = 0.0;
  for (double v : samples_) s += v * v;
  return std::sqrt(s / samples_.size());
}

bool Field::finite() const { return all_finite(samples_); }

std::vector<cplx> coeffs_of_samples(const std::vector<double>& samples) {
  const size_t n = samples.size();
  std::vector<cplx> in(n);
  for (size_t j = 0; j < n; ++j) in[j] = samples[j];
  std::vector<cplx> out = dft_forward(in);
  const double scale = 1.0 / static_cast<double>(n);
  for (cplx& c : out) c *= scale;
  return out;
}

std::vector<double> samples_of_coeffs(const std::vector<cplx>& coeffs,
                                      double imag_tol_rel) {
  std::vector<cplx> tmp = dft_backward(coeffs);
  double sup_re = 0.0, sup_im = 0.0;
  for (const cplx& c : tmp) {
    sup_re = std::max(sup_re, std::abs(c.real()));
    sup_im = std::max(sup_im, std::abs(c.imag()));
  }
  if (sup_im > imag_tol_rel * std::max(1.0, sup_re))
    fail(errc::symmetry, "inverse transform has an imaginary residue");
  std::vector<double> out(tmp.size());
  for (size_t j = 0; j < tmp.size(); ++j) out[j] = tmp[j].real();
  return out;
}

std::vector<double> refine_samples(const std::vector<cplx>& coeffs, int m) {
  const int n = static_cast<int>(coeffs.size());
  if (m < n) fail(errc::parameter, "refinement target must not shrink the grid");
  if (m == n) return samples_of_coeffs(coeffs);
  std::vector<cplx> fine(static_cast<size_t>(m), cplx(0.0, 0.0));
  const int half = n / 2;
  for (int k = 0; k < half; ++k) fine[static_cast<size_t>(k)] = coeffs[static_cast<size_t>(k)];
  for (int k = half + 1; k < n; ++k)
    fine[static_cast<size_t>(m - n + k)] = coeffs[static_cast<size_t>(k)];
  // Split the unpaired Nyquist coefficient between +n/2 and -n/2 so the
  // interpolant is the real trigonometric one.
  cplx nyq = 0.5 * coeffs[static_cast<size_t>(half)];
  fine[static_cast<size_t>(half)] += nyq;
  fine[static_cast<size_t>(m - half)] += std::conj(nyq);
  return samples_of_coeffs(fine);
}

}  // namespace kdv
