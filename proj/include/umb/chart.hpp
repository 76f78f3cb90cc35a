#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace umb {

using Point = std::vector<double>;

/// Axis-aligned validity box of a chart. Sample generators shrink the box by
/// `margin` (a fraction of each extent, per side) so that no sample lands in
/// the degenerate zone near the chart boundary.
struct ChartDomain {
  Point lo;
  Point hi;
  double margin = 0.05;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  static ChartDomain cube(int n, double half_width) {
    ChartDomain d;
    d.lo.assign(static_cast<std::size_t>(n), -half_width);
    d.hi.assign(static_cast<std::size_t>(n), half_width);
    return d;
  }

  static ChartDomain box(Point lo, Point hi) {
    ChartDomain d;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
  }

  /// Cartesian product of two domains (block coordinates).
  static ChartDomain product(const ChartDomain& a, const ChartDomain& b) {
    ChartDomain d = a;
    d.lo.insert(d.lo.end(), b.lo.begin(), b.lo.end());
    d.hi.insert(d.hi.end(), b.hi.begin(), b.hi.end());
    return d;
  }

  /// Append one extra coordinate interval.
  ChartDomain extended(double lo1, double hi1) const {
    ChartDomain d = *this;
    d.lo.push_back(lo1);
    d.hi.push_back(hi1);
    return d;
  }
};

/// Deterministic low-discrepancy samples inside the margin-shrunk domain.
/// The Halton start index is derived from `seed`, so reports are reproducible
/// bit-for-bit for a given (seed, count).
std::vector<Point> sample_points(const ChartDomain& domain, std::size_t count,
                                 std::uint64_t seed);

double halton(std::uint64_t index, int base);

std::string format_point(std::span<const double> x);

}  // namespace umb
