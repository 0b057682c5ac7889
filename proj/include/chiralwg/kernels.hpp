#pragma once

#include <functional>
#include <span>
#include <vector>

namespace chiralwg::kernels {

struct PointValue {
  double transmission = 1;
  double reflection = 0;

  bool operator==(const PointValue&) const = default;
};

using PointEvaluator = std::function<PointValue(double)>;

enum class Execution { Serial, Parallel };

// Reference implementation: one evaluation per grid point, in order.
std::vector<PointValue> evaluate_grid_serial(std::span<const double> grid, const PointEvaluator& f);

// OpenMP over grid points. Each point is computed exactly as in the serial
// kernel, so results are bitwise identical. The first exception thrown by any
// point is rethrown on the calling thread.
std::vector<PointValue> evaluate_grid_parallel(std::span<const double> grid, const PointEvaluator& f);

std::vector<PointValue> evaluate_grid(std::span<const double> grid, const PointEvaluator& f,
                                      Execution execution);

// Scalar variant used for power sweeps.
std::vector<double> map_serial(std::span<const double> xs, const std::function<double(double)>& f);
std::vector<double> map_parallel(std::span<const double> xs, const std::function<double(double)>& f);

// Thread control. `SIM_THREADS` (positive integer) caps the team size.
int max_threads();
void set_thread_cap(int threads);
void apply_thread_cap_from_env();

}  // namespace chiralwg::kernels
