#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umb/cones.hpp"
#include "umb/curvature.hpp"
#include "umb/zoo.hpp"

using namespace umb;

TEST_CASE("cone over the unit sphere is flat") {
  for (int n : {2, 3}) {
    const MetricPtr cone = cone_metric(zoo::sphere_metric(n, 1.0), 0.5, 2.0);
    for (const Point& x : sample_points(cone->domain, 8, 1)) {
      const CurvatureAtPoint c = curvature(*cone, x);
      double worst = 0.0;
      for (double v : c.riemann) worst = std::max(worst, std::abs(v));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("cone over a flat torus is curved") {
  const auto torus = zoo::build("flat_torus", {{"n", 2}});
  const MetricPtr cone = cone_metric(torus->metric, 0.5, 2.0);
  double worst = 0.0;
  for (const Point& x : sample_points(cone->domain, 5, 2)) {
    const CurvatureAtPoint c = curvature(*cone, x);
    for (double v : c.riemann) worst = std::max(worst, std::abs(v));
  }
  CHECK(worst > 0.01);
}

TEST_CASE("t = 1 slice of any cone is umbilical with lambda^2 = 1") {
  const std::vector<MetricPtr> bases = {zoo::sphere_metric(3, 1.0),
                                        zoo::build("flat_torus", {{"n", 2}})->metric,
                                        zoo::build("fubini_study_cp2")->metric};
  for (const MetricPtr& base : bases) {
    const MetricPtr cone = cone_metric(base, 0.5, 2.0);
    const Embedding slice = cone_slice_embedding(cone, base->dim, 1.0);
    double lam_min = 1e30, lam_max = -1e30;
    for (const Point& u : sample_points(slice.domain, 6, 3)) {
      CHECK(umbilicity_residual(slice, u) < 1e-9);
      const double lam = second_fundamental_form(slice, u).lambda_estimate;
      lam_min = std::min(lam_min, lam);
      lam_max = std::max(lam_max, lam);
      CHECK(std::abs(lam * lam - 1.0) < 1e-9);
    }
    CHECK(lam_max - lam_min < 1e-9);  // constant across the slice
  }
}

TEST_CASE("slices at other radii are umbilical too, with lambda^2 = 1/t^2") {
  const MetricPtr cone = cone_metric(zoo::sphere_metric(2, 1.0), 0.5, 2.0);
  for (const double t0 : {0.7, 1.5}) {
    const Embedding slice = cone_slice_embedding(cone, 2, t0);
    const Point u = {0.3, -0.4};
    CHECK(umbilicity_residual(slice, u) < 1e-9);
    const double lam = second_fundamental_form(slice, u).lambda_estimate;
    CHECK(std::abs(lam) == doctest::Approx(1.0 / t0).epsilon(1e-9));
  }
}

TEST_CASE("sine join of unit circles is the round 3-sphere") {
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const MetricPtr join = sine_cone_join(s1->metric, s1->metric);
  for (const Point& x : sample_points(join->domain, 10, 4)) {
    const CurvatureAtPoint c = curvature(*join, x);
    // all sectional curvatures equal 1
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        std::vector<double> X(3, 0.0), Y(3, 0.0);
        X[static_cast<std::size_t>(i)] = 1.0;
        Y[static_cast<std::size_t>(j)] = 1.0;
        CHECK(sectional_curvature(c, X, Y) == doctest::Approx(1.0).epsilon(1e-7));
      }
    CHECK(c.scalar == doctest::Approx(6.0).epsilon(1e-7));
  }
}

TEST_CASE("sine join of unit S^2 and unit S^1 is einstein with Ric = 3g") {
  const auto s2 = zoo::build("round_sphere", {{"n", 2}});
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const MetricPtr join = sine_cone_join(s2->metric, s1->metric);
  for (const Point& x : sample_points(join->domain, 6, 5)) {
    const CurvatureAtPoint c = curvature(*join, x);
    const int n = 4;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(c.ricci[static_cast<std::size_t>(i * n + j)] -
                       3.0 * c.g[static_cast<std::size_t>(i * n + j)]) < 1e-7);
  }
}

TEST_CASE("join endpoint degeneration is kept out of the chart") {
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const MetricPtr join = sine_cone_join(s1->metric, s1->metric);
  const int n = join->dim;
  const Point bad = {3.0, 3.0, 0.0};  // theta = 0
  CHECK(!join->domain.contains(bad));
  CHECK(join->domain.lo[static_cast<std::size_t>(n - 1)] > 0.0);
  CHECK(join->domain.hi[static_cast<std::size_t>(n - 1)] < std::numbers::pi / 2);
}

TEST_CASE("degenerate factors are refused") {
  auto zero_dim = std::make_shared<MetricField>();
  zero_dim->dim = 0;
  zero_dim->label = "point";
  CHECK_THROWS_AS(sine_cone_join(zero_dim, zoo::sphere_metric(2, 1.0)), DomainError);
  CHECK_THROWS_AS(cone_metric(zoo::sphere_metric(2, 1.0), -1.0, 2.0), DomainError);
  CHECK_THROWS_AS(cone_metric(zoo::sphere_metric(2, 1.0), 0.0, 2.0), DomainError);
}

TEST_CASE("product of cones is the cone over the join") {
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const auto s2 = zoo::build("round_sphere", {{"n", 2}});
  const auto flat1 = zoo::build("flat_torus", {{"n", 1}});

  // samples (u1, u2, theta, r) with theta in (0, pi/2), r > 0
  const auto make_samples = [](int n1, int n2, std::size_t count) {
    ChartDomain d = ChartDomain::cube(n1 + n2, 1.0).extended(0.1, std::numbers::pi / 2 - 0.1);
    d = d.extended(0.4, 2.5);
    return sample_points(d, count, 6);
  };

  {
    const ResidualSummary r =
        product_cone_isometry_residual(s1->metric, s1->metric, make_samples(1, 1, 50));
    CHECK(r.max < 1e-12);
  }
  {
    const ResidualSummary r =
        product_cone_isometry_residual(s2->metric, flat1->metric, make_samples(2, 1, 50));
    CHECK(r.max < 1e-12);
  }
  {
    // the symmetric point theta = pi/4, r = 1 maps to t = s = sqrt(2)/2
    Point x = {0.3, 0.2, std::numbers::pi / 4, 1.0};
    const ResidualSummary r = product_cone_isometry_residual(s1->metric, s1->metric, {x});
    CHECK(r.max < 1e-12);
    CHECK(std::sin(std::numbers::pi / 4) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  }
  {
    Point degenerate = {0.3, 0.2, 0.0, 1.0};  // theta = 0
    CHECK_THROWS_AS(
        product_cone_isometry_residual(s1->metric, s1->metric, {degenerate}),
        DomainError);
  }
}

TEST_CASE("ricci of a cone over a normalized einstein base vanishes") {
  // bases with Ric = (n-1) g: unit spheres and the join of unit circles
  const auto s3 = zoo::build("round_sphere", {{"n", 3}});
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const MetricPtr join = sine_cone_join(s1->metric, s1->metric);

  for (const MetricPtr& base : {s3->metric, join}) {
    const MetricPtr cone = cone_metric(base, 0.5, 2.0);
    for (const Point& x : sample_points(cone->domain, 5, 7)) {
      const CurvatureAtPoint c = curvature(*cone, x);
      for (double v : c.ricci) CHECK(std::abs(v) < 1e-7);
    }
  }

  // negative control: cone over a radius-2 sphere is not Ricci flat
  const MetricPtr off = cone_metric(zoo::sphere_metric(3, 2.0), 0.5, 2.0);
  double worst = 0.0;
  const CurvatureAtPoint c = curvature(*off, sample_points(off->domain, 1, 8)[0]);
  for (double v : c.ricci) worst = std::max(worst, std::abs(v));
  CHECK(worst > 0.1);
}

TEST_CASE("theta slices of a two-factor join are not umbilical") {
  // The umbilical hypersurface associated with a join lives one level up, as
  // the r = const slice of the cone over it; the theta slices inside the
  // join carry unequal principal curvatures on the two blocks.
  const auto s1 = zoo::build("round_sphere", {{"n", 1}});
  const MetricPtr join = sine_cone_join(s1->metric, s1->metric);
  const Embedding slice = join_slice_embedding(join, 1, 1, 0.6);
  CHECK(umbilicity_residual(slice, {1.0, 2.0}) > 0.1);
  CHECK_THROWS_AS(gauss_residual(slice, {1.0, 2.0}), PreconditionError);

  const MetricPtr cone = cone_metric(join, 0.5, 2.0);
  const Embedding rslice = cone_slice_embedding(cone, 3, 1.0);
  CHECK(umbilicity_residual(rslice, {1.0, 2.0, 0.7}) < 1e-9);
}
