#include "umb/chart.hpp"

#include <array>
#include <cstdio>

namespace umb {

namespace {
constexpr std::array<int, 10> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::vector<Point> sample_points(const ChartDomain& domain, std::size_t count,
                                 std::uint64_t seed) {
  const int n = domain.dim();
  // Offsetting the Halton index by the seed keeps distinct seeds on distinct
  // but still low-discrepancy slices of the sequence.
  const std::uint64_t offset = 17 + 1009 * seed;
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Point x(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      const double u = halton(offset + s, kHaltonBases[static_cast<std::size_t>(d % 10)]);
      const double lo = domain.lo[static_cast<std::size_t>(d)];
      const double hi = domain.hi[static_cast<std::size_t>(d)];
      const double m = domain.margin * (hi - lo);
      x[static_cast<std::size_t>(d)] = lo + m + u * (hi - lo - 2.0 * m);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

std::string format_point(std::span<const double> x) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", x[i]);
    s += buf;
    if (i + 1 < x.size()) s += ", ";
  }
  s += ")";
  return s;
}

}  // namespace umb
