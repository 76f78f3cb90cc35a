#pragma once

#include <functional>
#include <vector>

#include "umb/chart.hpp"
#include "umb/summary.hpp"

namespace umb {

/// Execution policy for the pointwise sweep kernels. `Parallel` distributes
/// the per-point evaluations over OpenMP threads; the merge runs serially in
/// fixed index order, so both policies produce bit-identical summaries.
enum class Exec { Serial, Parallel };

/// Evaluate `fn` at every index in [0, n) and collect results in index order.
/// Exceptions thrown by `fn` are captured on the worker and rethrown once.
void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

/// Residual sweep: evaluate a nonnegative pointwise residual over a sample
/// set and reduce to max/mean statistics.
ResidualSummary sweep_residual(const std::vector<Point>& points, Exec exec,
                               const std::function<double(const Point&)>& residual);

/// Map a pointwise evaluation over the samples, preserving order.
std::vector<double> sweep_values(const std::vector<Point>& points, Exec exec,
                                 const std::function<double(const Point&)>& fn);

}  // namespace umb
