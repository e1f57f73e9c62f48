#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace amalgam::detail {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& shape, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(shape, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    // Planning with FFTW_ESTIMATE does not touch the buffer contents.
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch, scratch,
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw std::runtime_error("FFTW failed to create a plan");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(std::complex<double>* data, const std::vector<int>& shape, FftDirection dir) {
  if (shape.empty()) throw std::invalid_argument("fft needs at least one axis");
  for (int s : shape) {
    if (s <= 0) throw std::invalid_argument("fft axis length must be positive");
  }
  const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(shape, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace amalgam::detail
