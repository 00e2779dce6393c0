#include "tnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "tnls/errors.hpp"

namespace tnls {

void* fftw_aligned_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

namespace {

// FFTW's planner is not thread-safe; executing an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanCache {
  std::map<std::tuple<int, int, int, int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan plan_for(const Index4& grid, int sign) {
  static PlanCache cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  const auto key = std::make_tuple(grid[0], grid[1], grid[2], grid[3], sign);
  auto it = cache.plans.find(key);
  if (it != cache.plans.end()) return it->second;
  std::size_t total = 1;
  for (int g : grid) total *= static_cast<std::size_t>(g);
  auto* scratch = static_cast<fftw_complex*>(fftw_malloc(total * sizeof(fftw_complex)));
  if (scratch == nullptr) throw std::bad_alloc();
  fftw_plan plan = fftw_plan_dft(kDim, grid.data(), scratch, scratch, sign, FFTW_ESTIMATE);
  fftw_free(scratch);
  if (plan == nullptr) throw NumericError("FFTW failed to create a plan");
  cache.plans.emplace(key, plan);
  return plan;
}

void run(const Index4& grid, ComplexArray& data, int sign) {
  std::size_t total = 1;
  for (int g : grid) total *= static_cast<std::size_t>(g);
  if (data.size() != total) throw DomainError("array size does not match grid");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(grid, sign), p, p);
}

}  // namespace

void fft_forward_inplace(const Index4& grid, ComplexArray& data) { run(grid, data, FFTW_FORWARD); }
void fft_backward_inplace(const Index4& grid, ComplexArray& data) { run(grid, data, FFTW_BACKWARD); }

}  // namespace tnls
