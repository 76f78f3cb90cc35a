#include "umb/sweep.hpp"

#include "umb/errors.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace umb {

void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(umb_sweep_error)
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> sweep_values(const std::vector<Point>& points, Exec exec,
                                 const std::function<double(const Point&)>& fn) {
  std::vector<double> out(points.size(), 0.0);
  for_each_index(points.size(), exec, [&](std::size_t i) {
    try {
      out[i] = fn(points[i]);
    } catch (const DomainError& e) {
      // annotate with the sample point when the evaluator did not know it
      if (e.where().empty()) throw DomainError(e.what(), points[i]);
      throw;
    }
  });
  return out;
}

ResidualSummary sweep_residual(const std::vector<Point>& points, Exec exec,
                               const std::function<double(const Point&)>& residual) {
  const std::vector<double> values = sweep_values(points, exec, residual);
  ResidualSummary s;
  for (std::size_t i = 0; i < points.size(); ++i) s.absorb(values[i], points[i]);
  return s;
}

}  // namespace umb
