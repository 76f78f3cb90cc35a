#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umb/embedding.hpp"
#include "umb/zoo.hpp"

using namespace umb;

namespace {

Embedding graph_embedding(int n, MetricPtr ambient) {
  Embedding e;
  e.intrinsic_dim = n;
  e.ambient = std::move(ambient);
  e.label = "hyperplane";
  e.domain = ChartDomain::cube(n, 2.0);
  e.map = [n](std::span<const Jet> u) {
    JetVec x(u.begin(), u.end());
    x.push_back(Jet::constant_like(u[0], 0.0));
    return x;
  };
  return e;
}

// Spherical (colatitude/longitude) parametrization of the unit 2-sphere.
Embedding spherical_s2(MetricPtr ambient) {
  Embedding e;
  e.intrinsic_dim = 2;
  e.ambient = std::move(ambient);
  e.label = "S^2 spherical chart";
  e.domain = ChartDomain::box({0.3, 0.3}, {std::numbers::pi - 0.3, 2 * std::numbers::pi - 0.3});
  e.map = [](std::span<const Jet> u) {
    const Jet& th = u[0];
    const Jet& ph = u[1];
    return JetVec{sin(th) * cos(ph), sin(th) * sin(ph), cos(th)};
  };
  return e;
}

Embedding cylinder(MetricPtr ambient) {
  Embedding e;
  e.intrinsic_dim = 2;
  e.ambient = std::move(ambient);
  e.label = "cylinder";
  e.domain = ChartDomain::box({0.2, -1.5}, {2 * std::numbers::pi - 0.2, 1.5});
  e.map = [](std::span<const Jet> u) {
    return JetVec{cos(u[0]), sin(u[0]), u[1]};
  };
  return e;
}

Embedding ellipsoid(MetricPtr ambient) {
  // x^2 + y^2 + 4 z^2 = 1, graph-style chart over (theta, phi)
  Embedding e;
  e.intrinsic_dim = 2;
  e.ambient = std::move(ambient);
  e.label = "ellipsoid";
  e.domain = ChartDomain::box({0.4, 0.3}, {std::numbers::pi - 0.4, 2 * std::numbers::pi - 0.3});
  e.map = [](std::span<const Jet> u) {
    const Jet& th = u[0];
    const Jet& ph = u[1];
    return JetVec{sin(th) * cos(ph), sin(th) * sin(ph), cos(th) * 0.5};
  };
  return e;
}

}  // namespace

TEST_CASE("first fundamental form basics") {
  const MetricPtr flat3 = zoo::euclidean_metric(3);
  const MetricPtr flat4 = zoo::euclidean_metric(4);

  const Embedding plane = graph_embedding(2, flat3);
  const Eigen::MatrixXd g = first_fundamental_form(plane, {0.7, -0.3});
  CHECK((g - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  const Embedding s2 = spherical_s2(flat3);
  const Eigen::MatrixXd gs = first_fundamental_form(s2, {std::numbers::pi / 2, 1.0});
  CHECK(gs(0, 0) == doctest::Approx(1.0));
  CHECK(gs(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(gs(0, 1)) < 1e-12);

  // radius scaling: doubling the ambient radius at the same chart point
  // quadruples the induced metric
  Embedding big = spherical_s2(flat3);
  big.map = [](std::span<const Jet> u) {
    const Jet& th = u[0];
    const Jet& ph = u[1];
    return JetVec{2.0 * sin(th) * cos(ph), 2.0 * sin(th) * sin(ph), 2.0 * cos(th)};
  };
  const Point w = {1.1, 0.7};
  const Eigen::MatrixXd gu = first_fundamental_form(spherical_s2(flat3), w);
  const Eigen::MatrixXd gb = first_fundamental_form(big, w);
  CHECK((gb - 4.0 * gu).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("second fundamental form: plane, unit sphere, geodesic sphere") {
  const MetricPtr flat3 = zoo::euclidean_metric(3);
  const MetricPtr flat4 = zoo::euclidean_metric(4);

  const Embedding plane = graph_embedding(2, flat3);
  const HypersurfacePointData dp = second_fundamental_form(plane, {0.4, 0.9});
  CHECK(dp.second_fundamental.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(dp.lambda_estimate == doctest::Approx(0.0));

  Embedding sphere = zoo::sphere_in_euclidean(3, 1.0, flat4);
  // pick the orientation with lambda = +1 (inward normal)
  HypersurfacePointData ds = second_fundamental_form(sphere, {0.3, -0.2, 0.5});
  if (ds.lambda_estimate < 0) {
    sphere = zoo::flipped(sphere);
    ds = second_fundamental_form(sphere, {0.3, -0.2, 0.5});
  }
  CHECK(ds.lambda_estimate == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((ds.second_fundamental - ds.induced_metric).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(ds.shape_duality_residual < 1e-10);

  // normal is unit and orthogonal to the tangents
  const HyperFrame fr = hyper_frame(sphere, {0.3, -0.2, 0.5}, 2);
  double nn = 0.0;
  for (int al = 0; al < 4; ++al) nn += fr.normal[static_cast<std::size_t>(al)].value() *
                                        fr.normal[static_cast<std::size_t>(al)].value();
  CHECK(nn == doctest::Approx(1.0).epsilon(1e-12));
  for (int a = 0; a < 3; ++a) {
    double dot = 0.0;
    for (int al = 0; al < 4; ++al)
      dot += fr.normal[static_cast<std::size_t>(al)].value() * fr.tangents.at(a, al).value();
    CHECK(std::abs(dot) < 1e-12);
  }

  // geodesic sphere of angular radius pi/3 in the unit S^4: lambda = cot(pi/3)
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);
  Embedding geo = zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4);
  HypersurfacePointData dg = second_fundamental_form(geo, {0.2, -0.4, 0.6});
  if (dg.lambda_estimate < 0) {
    geo = zoo::flipped(geo);
    dg = second_fundamental_form(geo, {0.2, -0.4, 0.6});
  }
  CHECK(dg.lambda_estimate ==
        doctest::Approx(1.0 / std::tan(std::numbers::pi / 3)).epsilon(1e-7));
}

TEST_CASE("umbilicity residual: spheres yes, ellipsoid and cylinder no") {
  const MetricPtr flat3 = zoo::euclidean_metric(3);
  const MetricPtr flat4 = zoo::euclidean_metric(4);

  CHECK(umbilicity_residual(zoo::sphere_in_euclidean(3, 1.0, flat4), {0.3, 0.1, -0.7}) < 1e-10);
  CHECK(umbilicity_residual(graph_embedding(2, flat3), {0.5, 0.5}) < 1e-12);

  CHECK(umbilicity_residual(ellipsoid(flat3), {1.1, 0.8}) > 0.1);

  // cylinder: principal curvatures (1, 0), traceless norm = 1/sqrt(2)
  CHECK(umbilicity_residual(cylinder(flat3), {1.0, 0.3}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("gauss residual on canonical cases") {
  const MetricPtr flat4 = zoo::euclidean_metric(4);
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);

  // unit S^3 in flat R^4
  CHECK(gauss_residual(zoo::sphere_in_euclidean(3, 1.0, flat4), {0.3, -0.2, 0.5}).max < 1e-8);

  // equator S^3 in S^4 (totally geodesic, K = Kbar = 1)
  CHECK(gauss_residual(zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 2, s4),
                       {0.2, 0.4, -0.3}).max < 1e-8);

  // geodesic sphere rho = pi/3: K = 1 + cot^2 = 4/3 against ambient 1
  CHECK(gauss_residual(zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4),
                       {0.2, 0.4, -0.3}).max < 1e-7);

  // non-umbilical input refused loudly
  const MetricPtr flat3 = zoo::euclidean_metric(3);
  CHECK_THROWS_AS(gauss_residual(ellipsoid(flat3), {1.1, 0.8}), PreconditionError);
  CHECK_THROWS_AS(codazzi_residual(cylinder(flat3), {1.0, 0.3}), PreconditionError);
}

TEST_CASE("codazzi residual and traced form") {
  const MetricPtr flat4 = zoo::euclidean_metric(4);
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);

  const CodazziResult flat_case =
      codazzi_residual(zoo::sphere_in_euclidean(3, 1.0, flat4), {0.3, -0.2, 0.5});
  CHECK(flat_case.full.max < 1e-9);
  CHECK(flat_case.traced.max < 1e-9);

  const CodazziResult geo =
      codazzi_residual(zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4),
                       {0.2, 0.4, -0.3});
  CHECK(geo.full.max < 1e-7);
  CHECK(geo.traced.max < 1e-7);
}

TEST_CASE("einstein lambda relation on spheres") {
  const MetricPtr flat4 = zoo::euclidean_metric(4);
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);
  const std::vector<Point> samples = sample_points(ChartDomain::cube(3, 1.2), 6, 1);

  {
    // unit S^3 in flat R^4: lambda^2 = 1
    Embedding e = zoo::sphere_in_euclidean(3, 1.0, flat4);
    const EinsteinLambdaResult r = einstein_lambda_check(e, samples);
    CHECK(r.formula.max < 1e-8);
    CHECK(std::abs(r.lambda_mean * r.lambda_mean - 1.0) < 1e-9);
    CHECK(r.lambda_spread < 1e-9);
    CHECK(r.inequality_holds);
  }
  {
    // equator in S^4: lambda = 0, equality case of the inequality
    Embedding e = zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 2, s4);
    const EinsteinLambdaResult r = einstein_lambda_check(e, samples);
    CHECK(r.formula.max < 1e-7);
    CHECK(std::abs(r.lambda_mean) < 1e-9);
  }
  {
    // rho = pi/3: lambda^2 = 1/3, scal_g = n(n-1)(1+lambda^2) = 8
    Embedding e = zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4);
    const EinsteinLambdaResult r = einstein_lambda_check(e, samples);
    CHECK(r.formula.max < 1e-7);
    CHECK(r.lambda_mean * r.lambda_mean == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(r.scalar_spread < 1e-7);
  }

  // refused when the ambient is not flagged Einstein
  auto not_einstein = std::make_shared<MetricField>(*flat4);
  not_einstein->einstein = false;
  Embedding e = zoo::sphere_in_euclidean(3, 1.0, MetricPtr(not_einstein));
  CHECK_THROWS_AS(einstein_lambda_check(e, samples), PreconditionError);
}

TEST_CASE("frame equations at umbilical points") {
  const MetricPtr flat4 = zoo::euclidean_metric(4);
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);
  {
    const FrameEquationResult r =
        frame_equation_residual(zoo::sphere_in_euclidean(3, 1.0, flat4), {0.3, -0.2, 0.5});
    CHECK(r.tangent_residual < 1e-8);
    CHECK(r.normal_residual < 1e-8);
  }
  {
    const FrameEquationResult r = frame_equation_residual(
        zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4), {0.2, 0.4, -0.3});
    CHECK(r.tangent_residual < 1e-8);
    CHECK(r.normal_residual < 1e-8);
  }
}

TEST_CASE("orientation flip negates lambda, preserves residuals") {
  const MetricPtr s4 = zoo::sphere_metric(4, 1.0);
  const Embedding e = zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 3, s4);
  const Embedding f = zoo::flipped(e);
  const Point u = {0.2, 0.4, -0.3};
  const HypersurfacePointData de = second_fundamental_form(e, u);
  const HypersurfacePointData df = second_fundamental_form(f, u);
  CHECK(de.lambda_estimate == doctest::Approx(-df.lambda_estimate).epsilon(1e-12));
  CHECK((de.normal + df.normal).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(umbilicity_residual(e, u) == doctest::Approx(umbilicity_residual(f, u)));
  CHECK(gauss_residual(e, u).max == doctest::Approx(gauss_residual(f, u).max).epsilon(1e-9));
}

TEST_CASE("metric scaling c^2 g scales lambda by 1/c") {
  // ambient metric 4*delta: the unit chart sphere has lambda = 1/2
  auto scaled = std::make_shared<MetricField>(*zoo::euclidean_metric(4));
  scaled->components = [](std::span<const Jet> x) {
    JetVec g(16, Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < 4; ++i) g[static_cast<std::size_t>(i * 4 + i)] = Jet::constant_like(x[0], 4.0);
    return g;
  };
  Embedding e = zoo::sphere_in_euclidean(3, 1.0, MetricPtr(scaled));
  HypersurfacePointData d = second_fundamental_form(e, {0.3, -0.2, 0.5});
  CHECK(std::abs(d.lambda_estimate) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("pullback pair: volume form, kernel case, contact form") {
  const int n = 3;
  const MetricPtr flat4 = zoo::euclidean_metric(4);
  Embedding sphere = zoo::sphere_in_euclidean(n, 1.0, flat4);
  // inward orientation (lambda = +1)
  if (second_fundamental_form(sphere, {0.3, -0.2, 0.5}).lambda_estimate < 0)
    sphere = zoo::flipped(sphere);
  const Point u = {0.3, -0.2, 0.5};

  {
    // ambient volume: gamma = intrinsic volume (up to sign of N), beta = 0
    const FormField vol = constant_form(4, 4, {1.0}, flat4, "vol");
    const PullbackPair p = pullback_forms(sphere, vol, u);
    CHECK(p.decomposition_residual < 1e-10);
    for (double b : p.beta) CHECK(std::abs(b) < 1e-12);
    // compare |gamma| with sqrt(det g_induced)
    const Eigen::MatrixXd g = first_fundamental_form(sphere, u);
    CHECK(std::abs(p.gamma[0]) == doctest::Approx(std::sqrt(g.determinant())).epsilon(1e-9));
  }
  {
    // sigma with N in its kernel at u: wedge of two tangent covectors.
    // Build it from the normal: any constant 2-form with both slots tangent.
    const HyperFrame fr = hyper_frame(sphere, u, 1);
    // tangent covectors t1, t2 = duals of two tangent vectors
    FormValue comps(static_cast<std::size_t>(binom(4, 2)), 0.0);
    const ComboTable& ct = combo_table(4, 2);
    for (int r = 0; r < ct.count(); ++r) {
      const auto& I = ct.combo(r);
      const int a = I[0], b = I[1];
      comps[static_cast<std::size_t>(r)] =
          fr.tangents.at(0, a).value() * fr.tangents.at(1, b).value() -
          fr.tangents.at(0, b).value() * fr.tangents.at(1, a).value();
    }
    const FormField sigma = constant_form(4, 2, comps, flat4, "tangent 2-plane");
    const PullbackPair p = pullback_forms(sphere, sigma, u);
    CHECK(p.gamma_vanishes);
    CHECK(p.decomposition_residual < 1e-10);
  }
  {
    // flat Kaehler form on R^4 = C^2: gamma is the contact form with
    // eta(JN) = 1
    FormValue kc(static_cast<std::size_t>(binom(4, 2)), 0.0);
    kc[0] = 1.0;  // e0^e1
    kc[5] = 1.0;  // e2^e3
    const FormField omega = constant_form(4, 2, kc, flat4, "omega");
    const PullbackPair p = pullback_forms(sphere, omega, u);
    CHECK(p.decomposition_residual < 1e-10);
    // xi = JN pushed forward; eta(xi) = 1. Evaluate via ambient components:
    // eta as ambient covector is (N . omega) restricted; JN has components
    // J N = (-N1, N0, -N3, N2) for omega = e0^e1 + e2^e3.
    const HyperFrame fr = hyper_frame(sphere, u, 1);
    const double N0 = fr.normal[0].value(), N1 = fr.normal[1].value(),
                 N2 = fr.normal[2].value(), N3 = fr.normal[3].value();
    const Eigen::Vector4d jn(-N1, N0, -N3, N2);
    // (N . omega)(JN) = omega(N, JN) = <JN, JN> = 1
    double val = 0.0;
    const double Nv[4] = {N0, N1, N2, N3};
    const double om[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) val += om[a][b] * Nv[a] * jn(b);
    CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
    // and gamma is that covector pulled back: check against the field route
    const FormField eta = normal_contraction_pullback_field(sphere, omega, nullptr);
    const FormValue ev = eval_form(eta, u);
    for (std::size_t t = 0; t < ev.size(); ++t)
      CHECK(ev[t] == doctest::Approx(p.gamma[t]).epsilon(1e-10));
  }
}

TEST_CASE("rank-deficient parametrization is reported") {
  const MetricPtr flat3 = zoo::euclidean_metric(3);
  Embedding bad;
  bad.intrinsic_dim = 2;
  bad.ambient = flat3;
  bad.label = "collapsed";
  bad.domain = ChartDomain::cube(2, 1.0);
  bad.map = [](std::span<const Jet> u) {
    return JetVec{u[0], u[0], Jet::constant_like(u[0], 0.0)};  // rank 1
  };
  CHECK_THROWS_AS(first_fundamental_form(bad, {0.2, 0.2}), DomainError);
}
