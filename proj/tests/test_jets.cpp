#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "umb/fdcheck.hpp"
#include "umb/jet.hpp"

using namespace umb;

TEST_CASE("coordinate lifts") {
  const Jet a = Jet::variable(0, 2.0, 2, 2);
  CHECK(a.value() == 2.0);
  CHECK(a.d1(0) == 1.0);
  CHECK(a.d1(1) == 0.0);
  CHECK(a.d2(0, 0) == 0.0);

  const Jet b = Jet::variable(1, 0.0, 3, 1);
  CHECK(b.d1(0) == 0.0);
  CHECK(b.d1(1) == 1.0);
  CHECK(b.d1(2) == 0.0);

  CHECK_THROWS_AS(Jet::variable(3, 0.0, 3, 1), DomainError);
}

TEST_CASE("taylor coefficients of sin at 0") {
  const Jet x = Jet::variable(0, 0.0, 1, 3);
  const Jet s = sin(x);
  CHECK(s.value() == doctest::Approx(0.0));
  CHECK(s.d1(0) == doctest::Approx(1.0));
  CHECK(s.d2(0, 0) == doctest::Approx(0.0));
  CHECK(s.d3(0, 0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("x*x at 3 and 1/x at 2") {
  const Jet x3 = Jet::variable(0, 3.0, 1, 2);
  const Jet sq = x3 * x3;
  CHECK(sq.value() == doctest::Approx(9.0));
  CHECK(sq.d1(0) == doctest::Approx(6.0));
  CHECK(sq.d2(0, 0) == doctest::Approx(2.0));

  const Jet x2 = Jet::variable(0, 2.0, 1, 2);
  const Jet r = 1.0 / x2;
  CHECK(r.value() == doctest::Approx(0.5));
  CHECK(r.d1(0) == doctest::Approx(-0.25));
  CHECK(r.d2(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("exp chain rule at zero argument") {
  const Jet x = Jet::variable(0, 0.4, 2, 2);
  const Jet y = Jet::variable(1, -0.4, 2, 2);
  const Jet z = x + y;  // value 0, d1 = (1,1)
  const Jet e = exp(z);
  CHECK(e.value() == doctest::Approx(1.0));
  CHECK(e.d1(0) == doctest::Approx(z.d1(0)));
  CHECK(e.d1(1) == doctest::Approx(z.d1(1)));
}

TEST_CASE("domain errors carry through") {
  const Jet zero = Jet::variable(0, 0.0, 1, 1);
  CHECK_THROWS_AS(1.0 / zero, DomainError);
  const Jet neg = Jet::variable(0, -1.0, 1, 1);
  CHECK_THROWS_AS(sqrt(neg), DomainError);
  CHECK_THROWS_AS(log(neg), DomainError);
}

TEST_CASE("order truncation in mixed arithmetic") {
  const Jet a = Jet::variable(0, 1.5, 2, 3);
  const Jet b = Jet::variable(1, 0.5, 2, 1);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
  CHECK((a / b).order() == 1);
  CHECK(sin(b).order() == 1);
  CHECK(a.truncated(2).order() == 2);
}

TEST_CASE("product rule holds exactly") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = 3;
  for (int rep = 0; rep < 20; ++rep) {
    Jet a = Jet::constant(dist(rng), n, 3);
    Jet b = Jet::constant(dist(rng), n, 3);
    for (int i = 0; i < n; ++i) {
      a.d1(i) = dist(rng);
      b.d1(i) = dist(rng);
      for (int j = 0; j < n; ++j) {
        const double va = dist(rng), vb = dist(rng);
        a.d2(i, j) = va;
        a.d2(j, i) = va;
        b.d2(i, j) = vb;
        b.d2(j, i) = vb;
      }
    }
    const Jet p = a * b;
    for (int i = 0; i < n; ++i) {
      const double want = a.value() * b.d1(i) + a.d1(i) * b.value();
      CHECK(std::abs(p.d1(i) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
      for (int j = 0; j < n; ++j) {
        const double w2 = a.value() * b.d2(i, j) + a.d1(i) * b.d1(j) +
                          a.d1(j) * b.d1(i) + a.d2(i, j) * b.value();
        CHECK(std::abs(p.d2(i, j) - w2) <= 1e-12 * std::max(1.0, std::abs(w2)));
      }
    }
  }
}

namespace {

// Random expression tree over a few variables, safely guarded so every node
// stays inside the domain of its op. Used for the chain-rule statistics.
Jet random_expression(std::span<const Jet> vars, std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick_op(0, 9);
  std::uniform_int_distribution<std::size_t> pick_var(0, vars.size() - 1);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  if (depth == 0) return vars[pick_var(rng)] * coef(rng) + coef(rng);
  const Jet lhs = random_expression(vars, rng, depth - 1);
  switch (pick_op(rng)) {
    case 0: return lhs + random_expression(vars, rng, depth - 1);
    case 1: return lhs - random_expression(vars, rng, depth - 1);
    case 2: return lhs * random_expression(vars, rng, depth - 1);
    case 3: {
      const Jet d = random_expression(vars, rng, depth - 1);
      return lhs / (d * d + 1.5);  // denominator bounded away from zero
    }
    case 4: return sin(lhs);
    case 5: return cos(lhs);
    case 6: return exp(lhs * 0.3);
    case 7: return sqrt(lhs * lhs + 0.7);
    case 8: return atan(lhs);
    default: return pow(lhs * lhs + 1.2, 1.7);
  }
}

}  // namespace

TEST_CASE("chain rule vs central differences over random expressions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pt(-0.8, 0.8);
  double worst_d1 = 0.0, worst_d2 = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rep % 2);
    Point x0(static_cast<std::size_t>(n));
    for (auto& c : x0) c = pt(rng);
    const std::uint64_t expr_seed = rng();
    const ScalarFieldFn f = [expr_seed](std::span<const Jet> vars) {
      std::mt19937_64 local(expr_seed);
      return random_expression(vars, local, 3);
    };
    const FdCheckResult r = finite_difference_check(f, x0, 1e-4);
    worst_d1 = std::max(worst_d1, r.max_rel_d1);
    worst_d2 = std::max(worst_d2, r.max_rel_d2);
  }
  CHECK(worst_d1 < 1e-6);
  CHECK(worst_d2 < 1e-4);
}

TEST_CASE("finite_difference_check spec points") {
  const ScalarFieldFn f = [](std::span<const Jet> v) { return sin(v[0]) * exp(v[1]); };
  const FdCheckResult r = finite_difference_check(f, {0.3, 0.7}, 1e-4);
  CHECK(r.max_rel_d1 < 1e-6);

  const ScalarFieldFn c = [](std::span<const Jet> v) {
    return Jet::constant_like(v[0], 2.5);
  };
  const FdCheckResult rc = finite_difference_check(c, {0.1, -0.2}, 1e-4);
  CHECK(rc.max_rel_d1 == 0.0);

  const ScalarFieldFn sq = [](std::span<const Jet> v) { return v[0] * v[0]; };
  const FdCheckResult rs = finite_difference_check(sq, {1.0}, 1e-3);
  CHECK(rs.max_rel_d2 < 1e-5);
}

TEST_CASE("compose matches direct evaluation") {
  // h(u) = F(g0(u), g1(u)) with F(x,y) = sin(x)*y + y^3, computed once by
  // composing jets and once by running the whole expression directly.
  const Point u0 = {0.4, -0.3};
  const JetVec u = lift_point(u0, 3);
  const Jet g0 = sin(u[0]) * cos(u[1]);
  const Jet g1 = u[0] * u[1] + 0.5;

  const Point x0 = {g0.value(), g1.value()};
  const JetVec x = lift_point(x0, 3);
  const Jet F = sin(x[0]) * x[1] + pow(x[1], 3);
  const Jet composed = compose(F, std::vector<Jet>{g0, g1});

  const Jet direct = sin(g0) * g1 + pow(g1, 3);
  CHECK(composed.value() == doctest::Approx(direct.value()).epsilon(1e-12));
  for (int a = 0; a < 2; ++a) {
    CHECK(composed.d1(a) == doctest::Approx(direct.d1(a)).epsilon(1e-12));
    for (int b = 0; b < 2; ++b) {
      CHECK(composed.d2(a, b) == doctest::Approx(direct.d2(a, b)).epsilon(1e-12));
      for (int c = 0; c < 2; ++c)
        CHECK(composed.d3(a, b, c) ==
              doctest::Approx(direct.d3(a, b, c)).epsilon(1e-11));
    }
  }
}

TEST_CASE("coefficient tensors stay symmetric through arithmetic") {
  const JetVec v = lift_point({0.4, -0.7, 1.1}, 3);
  const Jet f = sin(v[0] * v[1]) * exp(v[2] * 0.5) + pow(v[1] * v[1] + 1.3, 1.5) / (v[2] + 2.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(f.d2(i, j) == f.d2(j, i));
      for (int k = 0; k < 3; ++k) {
        CHECK(f.d3(i, j, k) == f.d3(j, i, k));
        CHECK(f.d3(i, j, k) == f.d3(i, k, j));
        CHECK(f.d3(i, j, k) == f.d3(k, j, i));
      }
    }
}

TEST_CASE("derive shifts coefficients") {
  const JetVec v = lift_point({0.7, 1.3}, 3);
  const Jet f = v[0] * v[0] * v[1] + sin(v[1]);
  const Jet fx = f.derive(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(2.0 * 0.7 * 1.3));
  CHECK(fx.d1(0) == doctest::Approx(2.0 * 1.3));
  CHECK(fx.d1(1) == doctest::Approx(2.0 * 0.7));
  CHECK(fx.d2(0, 1) == doctest::Approx(2.0));
}
