#pragma once

#include <functional>

#include "umb/jet.hpp"
#include "umb/summary.hpp"

namespace umb {

/// Compare the d1/d2 coefficients of a jet evaluation against central finite
/// differences with step h. Relative errors use max(|reference|, 1) as the
/// denominator so flat directions do not blow up the statistic.
struct FdCheckResult {
  double max_rel_d1 = 0.0;
  double max_rel_d2 = 0.0;
};

inline FdCheckResult finite_difference_check(const ScalarFieldFn& f, const Point& x0,
                                             double h = 1e-4) {
  if (h <= 0.0) throw DomainError("finite_difference_check: step must be positive");
  const int n = static_cast<int>(x0.size());
  const auto value_at = [&](const Point& x) {
    const JetVec lifted = lift_point(x, 0);
    return f(lifted).value();
  };
  const Jet j = f(lift_point(x0, 2));

  FdCheckResult out;
  for (int i = 0; i < n; ++i) {
    Point xp = x0, xm = x0;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    const double fd = (value_at(xp) - value_at(xm)) / (2.0 * h);
    const double rel = std::abs(j.d1(i) - fd) / std::max(1.0, std::abs(fd));
    out.max_rel_d1 = std::max(out.max_rel_d1, rel);
  }
  const double f0 = value_at(x0);
  for (int i = 0; i < n; ++i)
    for (int jdx = i; jdx < n; ++jdx) {
      double fd;
      if (i == jdx) {
        Point xp = x0, xm = x0;
        xp[static_cast<std::size_t>(i)] += h;
        xm[static_cast<std::size_t>(i)] -= h;
        fd = (value_at(xp) - 2.0 * f0 + value_at(xm)) / (h * h);
      } else {
        Point xpp = x0, xpm = x0, xmp = x0, xmm = x0;
        xpp[static_cast<std::size_t>(i)] += h;
        xpp[static_cast<std::size_t>(jdx)] += h;
        xpm[static_cast<std::size_t>(i)] += h;
        xpm[static_cast<std::size_t>(jdx)] -= h;
        xmp[static_cast<std::size_t>(i)] -= h;
        xmp[static_cast<std::size_t>(jdx)] += h;
        xmm[static_cast<std::size_t>(i)] -= h;
        xmm[static_cast<std::size_t>(jdx)] -= h;
        fd = (value_at(xpp) - value_at(xpm) - value_at(xmp) + value_at(xmm)) / (4.0 * h * h);
      }
      const double rel = std::abs(j.d2(i, jdx) - fd) / std::max(1.0, std::abs(fd));
      out.max_rel_d2 = std::max(out.max_rel_d2, rel);
    }
  return out;
}

}  // namespace umb
