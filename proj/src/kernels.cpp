#include "chiralwg/kernels.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <omp.h>
#include <string>

namespace chiralwg::kernels {

namespace {

template <class Out, class F>
std::vector<Out> run_parallel(std::span<const double> xs, const F& f) {
  std::vector<Out> out(xs.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::ptrdiff_t>(xs.size());

#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = f(xs[i]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class Out, class F>
std::vector<Out> run_serial(std::span<const double> xs, const F& f) {
  std::vector<Out> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(f(x));
  return out;
}

}  // namespace

std::vector<PointValue> evaluate_grid_serial(std::span<const double> grid, const PointEvaluator& f) {
  return run_serial<PointValue>(grid, f);
}

std::vector<PointValue> evaluate_grid_parallel(std::span<const double> grid, const PointEvaluator& f) {
  return run_parallel<PointValue>(grid, f);
}

std::vector<PointValue> evaluate_grid(std::span<const double> grid, const PointEvaluator& f,
                                      Execution execution) {
  return execution == Execution::Parallel ? evaluate_grid_parallel(grid, f)
                                          : evaluate_grid_serial(grid, f);
}

std::vector<double> map_serial(std::span<const double> xs, const std::function<double(double)>& f) {
  return run_serial<double>(xs, f);
}

std::vector<double> map_parallel(std::span<const double> xs, const std::function<double(double)>& f) {
  return run_parallel<double>(xs, f);
}

int max_threads() { return omp_get_max_threads(); }

void set_thread_cap(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

void apply_thread_cap_from_env() {
  const char* env = std::getenv("SIM_THREADS");
  if (env == nullptr) return;
  try {
    const int cap = std::stoi(env);
    if (cap > 0 && cap < omp_get_max_threads()) omp_set_num_threads(cap);
  } catch (const std::exception&) {
    // Unparsable values leave the OpenMP default in place.
  }
}

}  // namespace chiralwg::kernels
