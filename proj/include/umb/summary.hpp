#pragma once

#include <cstddef>
#include <string>

#include "umb/chart.hpp"

namespace umb {

/// Max/mean statistics of a pointwise residual over a deterministic sample
/// set, with the worst offending point kept for diagnostics.
struct ResidualSummary {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  Point worst_point;
  bool degenerate = false;
  std::string note;

  void absorb(double r, const Point& at) {
    if (count == 0 || r > max) {
      max = r;
      worst_point = at;
    }
    mean = (mean * static_cast<double>(count) + r) / static_cast<double>(count + 1);
    ++count;
  }
};

}  // namespace umb
