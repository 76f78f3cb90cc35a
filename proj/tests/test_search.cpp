#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "umb/search.hpp"
#include "umb/zoo.hpp"

using namespace umb;

TEST_CASE("objective at theta = 0 reproduces the umbilical base") {
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 8);
  const std::vector<Point> samples = sample_points(fam.base.domain, 20, 1);
  const std::vector<double> zero(8, 0.0);
  const ObjectiveParts p = objective(fam, zero, samples);
  CHECK(p.immersion_ok);
  CHECK(p.value < 1e-18);
}

TEST_CASE("a single bump lifts the objective well above zero") {
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 8);
  const std::vector<Point> samples = sample_points(fam.base.domain, 20, 1);
  std::vector<double> theta(8, 0.0);
  theta[2] = 0.1;
  const ObjectiveParts p = objective(fam, theta, samples);
  CHECK(p.immersion_ok);
  CHECK(p.value > 1e-4);
}

TEST_CASE("immersion guard penalizes collapsing members") {
  HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 1);
  // constant inward displacement close to the full radius collapses the
  // sphere; replace the bump basis with a constant field
  fam.perturbation_basis = {[](std::span<const Jet> u) {
    return Jet::constant_like(u[0], 1.0);
  }};
  fam.trust_radius = 2.0;
  const std::vector<Point> samples = sample_points(fam.base.domain, 10, 1);
  // the base normal points inward (lambda = +1), so a positive constant
  // displacement close to 1 collapses the sphere toward the center
  const std::vector<double> theta = {0.9995};
  const ObjectiveParts p = objective(fam, theta, samples);
  CHECK(!p.immersion_ok);
  CHECK(p.value >= kImmersionPenalty);

  // outside the trust radius the member constructor refuses outright
  CHECK_THROWS_AS(fam.member(std::vector<double>{3.0}), DomainError);
}

TEST_CASE("positive control: perturbed S^3 converges from several seeds") {
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 8);
  OptimizerConfig cfg;
  cfg.budget = 2000;
  cfg.sample_count = 30;
  for (const std::uint64_t seed : {0ull, 1ull}) {
    cfg.seed = seed;
    const SearchResult r = optimize(fam, cfg);
    CHECK(r.verdict == "converged_to_umbilical");
    CHECK(r.best_objective < 1e-6);
    CHECK(r.evaluations <= 2000);
  }
}

TEST_CASE("equator control drives lambda to zero") {
  const HypersurfaceFamily fam = make_family("perturbed_equator_s4", 8);
  OptimizerConfig cfg;
  cfg.budget = 2000;
  cfg.sample_count = 30;
  cfg.seed = 2;
  // the lambda -> 0 claim needs the tighter floor: nearby geodesic spheres
  // are umbilical with small nonzero lambda, so the objective must be pushed
  // further down before |lambda| drops below 1e-4
  cfg.converge_threshold = 1e-9;
  const SearchResult r = optimize(fam, cfg);
  CHECK(r.verdict == "converged_to_umbilical");
  // lambda at the optimum: evaluate the member
  const Embedding member = fam.member(r.best_params);
  const std::vector<Point> samples = sample_points(fam.base.domain, 10, 2);
  double lam = 0.0;
  for (const Point& u : samples)
    lam = std::max(lam, std::abs(second_fundamental_form(member, u).lambda_estimate));
  CHECK(lam < 1e-4);
}

TEST_CASE("identical config and seed give identical traces") {
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 6);
  OptimizerConfig cfg;
  cfg.budget = 400;
  cfg.sample_count = 20;
  cfg.seed = 7;
  const SearchResult a = optimize(fam, cfg);
  const SearchResult b = optimize(fam, cfg);
  CHECK(a.trace == b.trace);
  CHECK(a.best_params == b.best_params);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("objective is invariant under reparametrizing the sample chart") {
  // Same geometric sphere, chart composed with a diffeomorphism; the
  // pointwise umbilicity residual at corresponding points must agree.
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 4);
  std::vector<double> theta = {0.05, -0.03, 0.08, 0.02};
  const Embedding member = fam.member(theta);

  Embedding reparam = member;
  const FieldFn inner_map = member.map;
  // u -> v(u): a gentle polynomial diffeomorphism of the chart cube
  const auto diffeo = [](std::span<const Jet> u) {
    JetVec v;
    v.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t j = (i + 1) % u.size();
      v.push_back(u[i] + 0.08 * u[i] * u[j] * 0.5);
    }
    return v;
  };
  reparam.map = [inner_map, diffeo](std::span<const Jet> ujets) {
    const JetVec v = diffeo(ujets);
    return inner_map(v);
  };

  for (const Point& u : sample_points(ChartDomain::cube(3, 1.0), 8, 5)) {
    // corresponding point: v(u)
    const JetVec v = diffeo(lift_point(u, 0));
    Point vu(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) vu[i] = v[i].value();
    const double r1 = umbilicity_residual(reparam, u);
    const double r2 = umbilicity_residual(member, vu);
    CHECK(std::abs(r1 - r2) < 1e-8);
  }
}

TEST_CASE("cp2 probe runs exploratorily and stalls above a floor") {
  const HypersurfaceFamily fam = make_family("cp2_probe", 6);
  OptimizerConfig cfg;
  cfg.budget = 150;
  cfg.sample_count = 15;
  cfg.seed = 0;
  const SearchResult r = optimize(fam, cfg);
  CHECK(r.verdict == "stalled_above_floor");
  CHECK(r.best_objective > 1e-4);
  CHECK(!r.trace.empty());
  CHECK(r.budget_exhausted);
}

TEST_CASE("optimizer preconditions") {
  const HypersurfaceFamily fam = make_family("perturbed_s3_in_r4", 4);
  OptimizerConfig cfg;
  cfg.budget = 50;  // below the documented floor
  CHECK_THROWS_AS(optimize(fam, cfg), DomainError);
  CHECK_THROWS_AS(make_family("nosuch", 4), DomainError);
}
