#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "umb/chart.hpp"
#include "umb/errors.hpp"
#include "umb/sweep.hpp"

using namespace umb;

TEST_CASE("serial and parallel sweeps produce bit-identical summaries") {
  const ChartDomain d = ChartDomain::cube(3, 2.0);
  const std::vector<Point> pts = sample_points(d, 200, 1);
  const auto fn = [](const Point& u) {
    return std::abs(std::sin(u[0]) * std::exp(u[1]) - u[2] * u[2] * 0.1);
  };
  const ResidualSummary a = sweep_residual(pts, Exec::Serial, fn);
  const ResidualSummary b = sweep_residual(pts, Exec::Parallel, fn);
  CHECK(a.max == b.max);      // bitwise: same evaluations, same merge order
  CHECK(a.mean == b.mean);
  CHECK(a.count == b.count);
  CHECK(a.worst_point == b.worst_point);

  const std::vector<double> va = sweep_values(pts, Exec::Serial, fn);
  const std::vector<double> vb = sweep_values(pts, Exec::Parallel, fn);
  CHECK(va == vb);
}

TEST_CASE("exceptions from worker evaluations are rethrown once") {
  const std::vector<Point> pts(64, Point{0.0});
  const auto fn = [](const Point&) -> double { throw DomainError("boom"); };
  CHECK_THROWS_AS(sweep_residual(pts, Exec::Parallel, fn), DomainError);
  CHECK_THROWS_AS(sweep_residual(pts, Exec::Serial, fn), DomainError);
}

TEST_CASE("sample generation is deterministic and respects the margin") {
  const ChartDomain d = ChartDomain::box({0.0, -1.0}, {2.0, 1.0});
  const std::vector<Point> a = sample_points(d, 64, 3);
  const std::vector<Point> b = sample_points(d, 64, 3);
  CHECK(a == b);
  const std::vector<Point> c = sample_points(d, 64, 4);
  CHECK(a != c);
  for (const Point& p : a) {
    CHECK(p[0] >= 0.0 + 0.05 * 2.0);
    CHECK(p[0] <= 2.0 - 0.05 * 2.0);
    CHECK(p[1] >= -1.0 + 0.05 * 2.0);
    CHECK(p[1] <= 1.0 - 0.05 * 2.0);
  }
}

TEST_CASE("summary statistics and worst point") {
  ResidualSummary s;
  s.absorb(0.5, {1.0});
  s.absorb(2.0, {2.0});
  s.absorb(1.0, {3.0});
  CHECK(s.max == 2.0);
  CHECK(s.mean == doctest::Approx(3.5 / 3));
  CHECK(s.count == 3);
  CHECK(s.worst_point == Point{2.0});
}
