#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>

#include "umb/forms.hpp"

using namespace umb;

namespace {

MetricPtr flat_metric(int n) {
  auto m = std::make_shared<MetricField>();
  m->dim = n;
  m->label = "flat";
  m->domain = ChartDomain::cube(n, 2.0);
  m->components = [n](std::span<const Jet> x) {
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i * n + i)] = Jet::constant_like(x[0], 1.0);
    return g;
  };
  return m;
}

MetricPtr sphere_metric(int n, double r) {
  auto m = std::make_shared<MetricField>();
  m->dim = n;
  m->label = "sphere";
  m->domain = ChartDomain::cube(n, 1.4 * r);
  m->components = [n, r](std::span<const Jet> x) {
    Jet q = Jet::constant_like(x[0], r * r);
    for (int i = 0; i < n; ++i) q = q + x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    const Jet conf = (4.0 * r * r * r * r) / (q * q);
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i * n + i)] = conf;
    return g;
  };
  return m;
}

/// Random polynomial-component k-form, deterministic per seed.
FormField random_poly_form(int n, int k, MetricPtr metric, std::uint64_t seed) {
  const long C = binom(n, k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  // each component: c0 + sum c_i x_i + sum c_ij x_i x_j
  std::vector<std::vector<double>> coeffs;
  for (long t = 0; t < C; ++t) {
    std::vector<double> c;
    c.push_back(coef(rng));
    for (int i = 0; i < n; ++i) c.push_back(coef(rng));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.push_back(coef(rng));
    coeffs.push_back(std::move(c));
  }
  FormField f;
  f.dim = n;
  f.degree = k;
  f.metric = std::move(metric);
  f.label = "random";
  f.components = [n, coeffs](std::span<const Jet> x) {
    JetVec out;
    for (const auto& c : coeffs) {
      Jet s = Jet::constant_like(x[0], c[0]);
      std::size_t t = 1;
      for (int i = 0; i < n; ++i) s = s + x[static_cast<std::size_t>(i)] * c[t++];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s = s + x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] * c[t++];
      out.push_back(std::move(s));
    }
    return out;
  };
  return f;
}

double max_abs(const FormValue& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("d(x dy) = dx^dy on R^2") {
  const MetricPtr m = flat_metric(2);
  FormField f;
  f.dim = 2;
  f.degree = 1;
  f.metric = m;
  f.components = [](std::span<const Jet> x) {
    return JetVec{Jet::constant_like(x[0], 0.0), x[0]};  // x dy
  };
  const FormField df = exterior_derivative(f);
  const FormValue v = eval_form(df, {0.7, -0.3});
  REQUIRE(v.size() == 1);
  CHECK(v[0] == doctest::Approx(1.0));
}

TEST_CASE("d^2 = 0 on random polynomial forms") {
  const MetricPtr m = flat_metric(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int k = static_cast<int>(seed % 3);
    const FormField f = random_poly_form(4, k, m, seed);
    const FormField ddf = exterior_derivative(exterior_derivative(f));
    const FormValue v = eval_form(ddf, {0.3, -0.2, 0.8, 0.1});
    CHECK(max_abs(v) < 1e-12);
  }
}

TEST_CASE("graded leibniz rule for d") {
  const MetricPtr m = flat_metric(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int p = 1, q = static_cast<int>(seed % 2) + 1;
    const FormField a = random_poly_form(4, p, m, seed * 2 + 1);
    const FormField b = random_poly_form(4, q, m, seed * 2 + 2);
    const FormField lhs = exterior_derivative(wedge(a, b));
    const FormField r1 = wedge(exterior_derivative(a), b);
    const FormField r2 = wedge(a, exterior_derivative(b));
    const Point x = {0.1, 0.5, -0.4, 0.2};
    const FormValue lv = eval_form(lhs, x);
    const FormValue v1 = eval_form(r1, x);
    const FormValue v2 = eval_form(r2, x);
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t t = 0; t < lv.size(); ++t)
      CHECK(std::abs(lv[t] - v1[t] - sign * v2[t]) < 1e-10);
  }
}

TEST_CASE("wedge basics and graded commutativity") {
  const MetricPtr m = flat_metric(3);
  const FormField dx = constant_form(3, 1, {1.0, 0.0, 0.0}, m, "dx");
  const FormField dy = constant_form(3, 1, {0.0, 1.0, 0.0}, m, "dy");

  const FormValue dxdx = eval_form(wedge(dx, dx), {0.0, 0.0, 0.0});
  CHECK(max_abs(dxdx) == 0.0);

  // (dx^dy)(e_x, e_y) = 1 with the chosen normalization: the combo (0,1)
  // component is +1.
  const FormValue dxdy = eval_form(wedge(dx, dy), {0.0, 0.0, 0.0});
  CHECK(dxdy[0] == doctest::Approx(1.0));
  CHECK(dxdy[1] == doctest::Approx(0.0));
  CHECK(dxdy[2] == doctest::Approx(0.0));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int p = 1 + rep % 2, q = 1;
    const FormField a = random_poly_form(3, p, m, rng());
    const FormField b = random_poly_form(3, q, m, rng());
    const Point x = {0.2, -0.6, 0.4};
    const FormValue ab = eval_form(wedge(a, b), x);
    const FormValue ba = eval_form(wedge(b, a), x);
    const double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t t = 0; t < ab.size(); ++t) CHECK(std::abs(ab[t] - sign * ba[t]) < 1e-12);
  }
}

TEST_CASE("interior product") {
  const MetricPtr m = flat_metric(3);
  const FormField dxdy = constant_form(3, 2, {1.0, 0.0, 0.0}, m, "dx^dy");
  const FormValue v = interior_product(std::vector<double>{1.0, 0.0, 0.0}, dxdy, {0, 0, 0});
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));  // e_x . (dx^dy) = dy
  CHECK(v[2] == doctest::Approx(0.0));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int rep = 0; rep < 20; ++rep) {
    const FormField f = random_poly_form(3, 2, m, rng());
    std::vector<double> w = {d(rng), d(rng), d(rng)};
    const Point x = {0.1, 0.2, 0.3};
    const FormValue once = interior_components<double>(3, 2, w, eval_form(f, x));
    const FormValue twice = interior_components<double>(3, 1, w, once);
    CHECK(max_abs(twice) < 1e-12);
  }

  const FormField scalar = constant_form(3, 0, {1.0}, m, "1");
  CHECK_THROWS_AS(interior_product(std::vector<double>{1, 0, 0}, scalar, {0, 0, 0}),
                  DomainError);
}

TEST_CASE("hodge star basics") {
  const MetricPtr m2 = flat_metric(2);
  const FormField one = constant_form(2, 0, {1.0}, m2, "1");
  const FormValue star1 = hodge_star(one, {0.0, 0.0});
  REQUIRE(star1.size() == 1);
  CHECK(star1[0] == doctest::Approx(1.0));  // *(1) = dx^dy

  // **sigma = (-1)^{k(n-k)} sigma on random forms, flat and curved metric
  for (const MetricPtr& m : {flat_metric(3), sphere_metric(3, 1.0)}) {
    std::mt19937_64 rng(17);
    for (int k = 0; k <= 3; ++k)
      for (int rep = 0; rep < 5; ++rep) {
        const FormField f = random_poly_form(3, k, m, rng());
        const Point x = {0.3, -0.1, 0.6};
        const FormValue fx = eval_form(f, x);
        // build a constant form from the pointwise value to star twice
        const FormField fc = constant_form(3, k, fx, m);
        const FormValue sfx = hodge_star(fc, x);
        const FormField sf = constant_form(3, 3 - k, sfx, m);
        const FormValue ssf = hodge_star(sf, x);
        const double sign = ((k * (3 - k)) % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t t = 0; t < fx.size(); ++t)
          CHECK(ssf[t] == doctest::Approx(sign * fx[t]).epsilon(1e-10));
      }
  }
}

TEST_CASE("codifferential: flat parallel form, hand value, hodge route") {
  const MetricPtr m3 = flat_metric(3);

  // parallel (constant) form on flat space
  const FormField cst = constant_form(3, 2, {0.3, -0.7, 1.1}, m3, "const");
  CHECK(max_abs(codifferential(cst, {0.4, 0.1, -0.2})) < 1e-14);

  // d*(x dx^dy) = -dy, by hand
  FormField f;
  f.dim = 3;
  f.degree = 2;
  f.metric = m3;
  f.components = [](std::span<const Jet> x) {
    return JetVec{x[0], Jet::constant_like(x[0], 0.0), Jet::constant_like(x[0], 0.0)};
  };
  const FormValue v = codifferential(f, {0.5, -0.3, 0.8});
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(-1.0));
  CHECK(v[2] == doctest::Approx(0.0));

  // d* = (-1)^{n(k+1)+1} * d * pointwise, on flat and curved charts
  for (const MetricPtr& m : {flat_metric(3), sphere_metric(3, 1.0)}) {
    std::mt19937_64 rng(23);
    for (int k = 1; k <= 2; ++k)
      for (int rep = 0; rep < 5; ++rep) {
        const FormField g = random_poly_form(3, k, m, rng());
        const Point x = {0.25, -0.15, 0.45};
        const FormValue direct = codifferential(g, x);

        // *d*g assembled from the pointwise operations: build *g as a field
        // by starring the evaluator, then d, then star again.
        const int n = 3;
        FormField sg;
        sg.dim = n;
        sg.degree = n - k;
        sg.metric = m;
        sg.jet_order_overhead = g.jet_order_overhead;
        const FormField ginner = g;
        sg.components = [ginner, n, k](std::span<const Jet> xj) {
          // star with jet entries: raise indices and contract with the
          // complementary combo, all in jet arithmetic
          const JetVec comps = ginner.components(xj);
          const JetMat gm = metric_jets(*ginner.metric, xj);
          const JetMat gi = jet_mat_inverse(gm);
          const Jet vol = sqrt(jet_mat_det(gm));
          const ComboTable& ct_in = combo_table(n, k);
          const ComboTable& ct_out = combo_table(n, n - k);
          JetVec out;
          std::vector<int> comp(static_cast<std::size_t>(k));
          for (int r = 0; r < ct_out.count(); ++r) {
            const auto& J = ct_out.combo(r);
            int t = 0;
            for (int vv = 0; vv < n; ++vv) {
              bool in_j = false;
              for (int u : J)
                if (u == vv) in_j = true;
              if (!in_j) comp[static_cast<std::size_t>(t++)] = vv;
            }
            // raised component sigma^comp
            Jet raised = Jet::constant_like(xj[0], 0.0);
            for (int c = 0; c < ct_in.count(); ++c) {
              const auto& I = ct_in.combo(c);
              JetMat minor(k, k, Jet::constant_like(xj[0], 0.0));
              for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                  minor.at(a, b) = gi.at(comp[static_cast<std::size_t>(a)], I[static_cast<std::size_t>(b)]);
              raised = raised + jet_mat_det(minor) * comps[static_cast<std::size_t>(c)];
            }
            const int sign = split_sign(std::span<const int>(comp.data(), comp.size()),
                                        std::span<const int>(J.data(), J.size()));
            out.push_back(raised * vol * static_cast<double>(sign));
          }
          return out;
        };
        const FormField dsg = exterior_derivative(sg);
        const FormValue sdsg = hodge_star(dsg, x);
        const double sign = ((n * (k + 1) + 1) % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t t = 0; t < direct.size(); ++t)
          CHECK(std::abs(direct[t] - sign * sdsg[t]) < 1e-8);
      }
  }
}

TEST_CASE("covariant derivative: metric compatibility and antisymmetrization") {
  for (const MetricPtr& m : {flat_metric(3), sphere_metric(3, 1.0)}) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int rep = 0; rep < 8; ++rep) {
      const int k = 1 + rep % 2;
      const FormField a = random_poly_form(3, k, m, rng());
      const FormField b = random_poly_form(3, k, m, rng());
      const Point x = {0.2, 0.4, -0.3};
      const std::vector<double> X = {d(rng), d(rng), d(rng)};

      // X g(a,b) via jets of the inner product field
      const JetVec xj = lift_point(x, 1);
      const JetVec av = a.components(xj);
      const JetVec bv = b.components(xj);
      const JetMat gm = metric_jets(*m, xj);
      const JetMat gi = jet_mat_inverse(gm);
      const ComboTable& ct = combo_table(3, k);
      Jet ip = Jet::constant_like(xj[0], 0.0);
      for (int r = 0; r < ct.count(); ++r)
        for (int c = 0; c < ct.count(); ++c) {
          const auto& I = ct.combo(r);
          const auto& J = ct.combo(c);
          JetMat minor(k, k, Jet::constant_like(xj[0], 0.0));
          for (int s = 0; s < k; ++s)
            for (int t = 0; t < k; ++t)
              minor.at(s, t) = gi.at(I[static_cast<std::size_t>(s)], J[static_cast<std::size_t>(t)]);
          ip = ip + av[static_cast<std::size_t>(r)] * bv[static_cast<std::size_t>(c)] * jet_mat_det(minor);
        }
      double lhs = 0.0;
      for (int i = 0; i < 3; ++i) lhs += X[static_cast<std::size_t>(i)] * ip.d1(i);

      const FormValue na = covariant_derivative_form(a, X, x);
      const FormValue nb = covariant_derivative_form(b, X, x);
      const MetricAtPoint mv = metric_values(*m, x);
      Eigen::MatrixXd ginv(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ginv(i, j) = mv.ginv[static_cast<std::size_t>(i * 3 + j)];
      const FormValue aval = eval_form(a, x);
      const FormValue bval = eval_form(b, x);
      const double rhs = form_inner(3, k, na, bval, ginv) + form_inner(3, k, aval, nb, ginv);
      CHECK(std::abs(lhs - rhs) < 1e-8);

      // antisymmetrization of nabla reproduces d
      const long C = binom(3, k);
      const std::vector<double> nt = nabla_form_tensor(a, x);
      const FormValue da = eval_form(exterior_derivative(a), x);
      const ComboTable& ct1 = combo_table(3, k + 1);
      const ComboTable& ctk = combo_table(3, k);
      std::vector<int> sub(static_cast<std::size_t>(k));
      for (int r = 0; r < ct1.count(); ++r) {
        const auto& K = ct1.combo(r);
        double s = 0.0;
        for (int j = 0; j <= k; ++j) {
          int t = 0;
          for (int q = 0; q <= k; ++q)
            if (q != j) sub[static_cast<std::size_t>(t++)] = K[static_cast<std::size_t>(q)];
          const double term = nt[static_cast<std::size_t>(K[static_cast<std::size_t>(j)] * C + ctk.rank(sub))];
          s += (j % 2 == 0) ? term : -term;
        }
        CHECK(std::abs(s - da[static_cast<std::size_t>(r)]) < 1e-8);
      }
    }
  }
}

TEST_CASE("volume form of the round sphere is parallel") {
  const int n = 3;
  const MetricPtr m = sphere_metric(n, 1.0);
  FormField vol;
  vol.dim = n;
  vol.degree = n;
  vol.metric = m;
  vol.label = "vol";
  vol.components = [n, m](std::span<const Jet> x) {
    const JetMat gm = metric_jets(*m, x);
    return JetVec{sqrt(jet_mat_det(gm))};
  };
  for (const Point& u : sample_points(m->domain, 10, 2)) {
    const std::vector<double> nt = nabla_form_tensor(vol, u);
    double worst = 0.0;
    for (double v : nt) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("top degree exterior derivative is flagged trivially zero") {
  const MetricPtr m = flat_metric(2);
  const FormField area = constant_form(2, 2, {1.0}, m, "area");
  const FormField d = exterior_derivative(area);
  CHECK(d.degree == 3);
  CHECK(eval_form(d, {0.0, 0.0}).empty());
  CHECK(d.label.find("trivially zero") != std::string::npos);
}
