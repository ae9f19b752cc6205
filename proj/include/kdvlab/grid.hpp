#pragma once

#include <complex>
#include <vector>

#include "kdvlab/errors.hpp"

namespace kdv {

using cplx = std::complex<double>;

// Uniform periodic grid on [0, period) with n = 2^k sample points.
// Frequencies are xi = 2*pi*m/period for integer m in [-n/2, n/2).
struct PeriodicGrid {
  int n = 0;
  double period = 0.0;

  PeriodicGrid() = default;
  PeriodicGrid(int n_, double period_);

  double dx() const { return period / n; }
  double node(int j) const { return period * j / n; }

  // Signed integer frequency for FFT bin k in [0, n): 0,1,...,n/2,-n/2+1,...,-1.
  // The unpaired bin n/2 is assigned +n/2; real fields keep it real.
  int mode(int bin) const { return bin <= n / 2 ? bin : bin - n; }
  double xi(int bin) const { return 2.0 * pi() * mode(bin) / period; }
  int bin_of_mode(int m) const { return m >= 0 ? m : m + n; }

  bool operator==(const PeriodicGrid& o) const { return n == o.n && period == o.period; }
  bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

  static double pi();
};

// Real-valued function on a PeriodicGrid together with its Fourier
// coefficients.  Both representations are built at construction and kept
// consistent; a Field never mutates.  Coefficient convention:
//   spectrum[bin] = (1/n) * sum_j samples[j] * exp(-2*pi*i*j*mode(bin)/n),
// the grid analogue of (1/period) * integral of exp(-i*xi*x) f(x) dx.
class Field {
 public:
  static Field from_samples(const PeriodicGrid& g, std::vector<double> samples);
  // Requires Hermitian symmetry (spectrum[n-k] = conj(spectrum[k]) and
  // real Nyquist bin); throws errc::symmetry otherwise.
  static Field from_spectrum(const PeriodicGrid& g, std::vector<cplx> spectrum);
  static Field zero(const PeriodicGrid& g);
  static Field constant(const PeriodicGrid& g, double value);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<cplx>& spectrum() const { return spectrum_; }
  double value(int j) const { return samples_[j]; }
  cplx coeff_of_mode(int m) const { return spectrum_[grid_.bin_of_mode(m)]; }
  double mean() const { return spectrum_[0].real(); }

  double sup_norm() const;
  double rms() const;  // sqrt of the grid average of f^2
  bool finite() const;

 private:
  Field(PeriodicGrid g, std::vector<double> s, std::vector<cplx> sp)
      : grid_(g), samples_(std::move(s)), spectrum_(std::move(sp)) {}
  PeriodicGrid grid_;
  std::vector<double> samples_;
  std::vector<cplx> spectrum_;
};

// Low-level DFTs used by Field and by the stage-potential refinement in the
// Hill-equation integrator.  Any length >= 1 is accepted (FFTW handles
// non-power-of-two sizes); plans are cached and creation is mutex-guarded.
std::vector<cplx> dft_forward(const std::vector<cplx>& in);    // no scaling
std::vector<cplx> dft_backward(const std::vector<cplx>& in);   // no scaling
std::vector<cplx> coeffs_of_samples(const std::vector<double>& samples);
std::vector<double> samples_of_coeffs(const std::vector<cplx>& coeffs,
                                      double imag_tol_rel = 1e-8);

// Trigonometric interpolation: zero-pad coefficients of length n to length
// m >= n (Nyquist bin split symmetrically) and return samples on the fine grid.
std::vector<double> refine_samples(const std::vector<cplx>& coeffs, int m);

}  // namespace kdv
