#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "kdvlab/grid.hpp"

namespace kdv {
namespace {

// One cached plan pair per transform length.  FFTW plan execution is only
// thread-safe on the arrays it was created with, so the buffers belong to the
// cache entry and the whole copy-execute-copy is done under the lock.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  int n = 0;
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

PlanPair& plan_for(int n) {
  static std::map<int, PlanPair> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  PlanPair p;
  p.n = n;
  p.in = fftw_alloc_complex(static_cast<size_t>(n));
  p.out = fftw_alloc_complex(static_cast<size_t>(n));
  p.fwd = fftw_plan_dft_1d(n, p.in, p.out, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_1d(n, p.in, p.out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, std::move(p)).first->second;
}

std::vector<cplx> run(const std::vector<cplx>& in, bool forward) {
  if (in.empty()) fail(errc::invalid_input, "empty transform input");
  const int n = static_cast<int>(in.size());
  std::lock_guard<std::mutex> lock(cache_mutex());
  PlanPair& p = plan_for(n);
  for (int j = 0; j < n; ++j) {
    p.in[j][0] = in[j].real();
    p.in[j][1] = in[j].imag();
  }
  fftw_execute(forward ? p.fwd : p.bwd);
  std::vector<cplx> out(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) out[j] = cplx(p.out[j][0], p.out[j][1]);
  return out;
}

}  // namespace

std::vector<cplx> dft_forward(const std::vector<cplx>& in) { return run(in, true); }
std::vector<cplx> dft_backward(const std::vector<cplx>& in) { return run(in, false); }

}  // namespace kdv
