#include "umb/zoo.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "umb/cones.hpp"
#include "umb/holonomy.hpp"

namespace umb::zoo {

namespace {

constexpr double kScalarTol = 1e-7;
constexpr double kParallelTol = 1e-8;
constexpr double kUmbilicTol = 1e-9;
constexpr int kValidationSamples = 10;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

FormField volume_form(MetricPtr m) {
  FormField f;
  f.dim = m->dim;
  f.degree = m->dim;
  f.metric = m;
  f.jet_order_overhead = m->jet_order_overhead;
  f.label = "vol(" + m->label + ")";
  const MetricPtr mp = std::move(m);
  f.components = [mp](std::span<const Jet> x) {
    const JetMat g = metric_jets(*mp, x);
    return JetVec{sqrt(jet_mat_det(g)) * static_cast<double>(mp->orientation)};
  };
  return f;
}

/// Flat Kaehler form on R^4: e0^e1 + e2^e3.
FormField flat_kahler_form(MetricPtr euclid4) {
  return constant_form(4, 2, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0}, std::move(euclid4), "omega_flat");
}

void orient_for_lambda_sign(Embedding& e, int sign) {
  const Point probe = sample_points(e.domain, 1, 7).front();
  const HypersurfacePointData d = second_fundamental_form(e, probe);
  if (d.lambda_estimate * sign < -1e-9) e.orientation = -e.orientation;
}

void validate_metric_basics(const ManifoldSpec& s) {
  const int n = s.metric->dim;
  for (const Point& u : s.samples(kValidationSamples, 11)) {
    const MetricAtPoint mv = metric_values(*s.metric, u);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        g(i, j) = mv.g[static_cast<std::size_t>(i * n + j)];
        if (std::abs(mv.g[static_cast<std::size_t>(i * n + j)] - mv.g[static_cast<std::size_t>(j * n + i)]) > 1e-12)
          throw DomainError(s.name + ": metric not symmetric at " + format_point(u));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.eigenvalues()(0) <= 0.0)
      throw DomainError(s.name + ": metric not positive definite at " + format_point(u));
  }
}

void validate_known_scalars(const ManifoldSpec& s) {
  const int n = s.metric->dim;
  if (s.known_scalar || s.known_einstein_constant) {
    for (const Point& u : s.samples(kValidationSamples, 13)) {
      const CurvatureAtPoint c = curvature(*s.metric, u);
      if (s.known_scalar && std::abs(c.scalar - *s.known_scalar) > kScalarTol)
        throw DomainError(s.name + ": scalar curvature " + fmt(c.scalar) + " != expected " +
                          fmt(*s.known_scalar) + " at " + format_point(u));
      if (s.known_einstein_constant) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const double want = *s.known_einstein_constant * c.g[static_cast<std::size_t>(i * n + j)];
            if (std::abs(c.ricci[static_cast<std::size_t>(i * n + j)] - want) > kScalarTol)
              throw DomainError(s.name + ": Ricci fails the Einstein condition at " +
                                format_point(u));
          }
      }
    }
  }
  if (s.known_holonomy_dim && n >= 2) {
    const Point u = s.samples(1, 17).front();
    const int dim = curvature_span_dimension(*s.metric, u, false);
    if (dim != *s.known_holonomy_dim)
      throw DomainError(s.name + ": curvature span dimension " + std::to_string(dim) +
                        " != expected " + std::to_string(*s.known_holonomy_dim));
  }
}

void validate_forms(const ManifoldSpec& s) {
  for (const NamedForm& nf : s.forms) {
    if (!nf.expect_parallel) continue;
    for (const Point& u : s.samples(kValidationSamples, 19)) {
      const std::vector<double> nt = nabla_form_tensor(nf.field, u);
      for (double v : nt)
        if (std::abs(v) > kParallelTol)
          throw DomainError(s.name + ": form " + nf.name + " not parallel at " +
                            format_point(u) + " (|nabla| = " + fmt(std::abs(v)) + ")");
    }
  }
}

void validate_embeddings(const ManifoldSpec& s) {
  for (const Embedding& e : s.umbilical_embeddings) {
    for (const Point& u : sample_points(e.domain, 5, 23)) {
      const double r = umbilicity_residual(e, u);
      if (r > kUmbilicTol)
        throw DomainError(s.name + ": canonical embedding " + e.label +
                          " not umbilical at " + format_point(u) + " (residual " + fmt(r) + ")");
    }
  }
}

void validate(const ManifoldSpec& s) {
  validate_metric_basics(s);
  validate_known_scalars(s);
  validate_forms(s);
  validate_embeddings(s);
}

// ---- entry builders -------------------------------------------------------

SpecPtr make_euclidean(int n) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "euclidean";
  s->params = {{"n", static_cast<double>(n)}};
  s->name = "euclidean(n=" + std::to_string(n) + ")";
  auto m = std::make_shared<MetricField>();
  m->dim = n;
  m->label = s->name;
  m->domain = ChartDomain::cube(n, 3.0);
  m->einstein = true;
  m->components = [n](std::span<const Jet> x) {
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i * n + i)] = Jet::constant_like(x[0], 1.0);
    return g;
  };
  s->metric = m;
  s->known_scalar = 0.0;
  s->known_einstein_constant = 0.0;
  s->known_holonomy_dim = 0;
  s->forms.push_back({"volume", volume_form(m), true, 0, 0.0, nullptr});
  if (n >= 2) {
    Embedding sphere = sphere_in_euclidean(n - 1, 1.0, m);
    orient_for_lambda_sign(sphere, +1);
    s->umbilical_embeddings.push_back(std::move(sphere));
  }
  return s;
}

SpecPtr make_round_sphere(int n, double r) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "round_sphere";
  s->params = {{"n", static_cast<double>(n)}, {"r", r}};
  s->name = "round_sphere(n=" + std::to_string(n) + ",r=" + fmt(r) + ")";
  if (n == 1) {
    // Circle: angle chart, flat 1-dim metric r^2 dtheta^2.
    auto m = std::make_shared<MetricField>();
    m->dim = 1;
    m->label = s->name;
    m->domain = ChartDomain::box({0.1}, {2.0 * std::numbers::pi - 0.1});
    m->einstein = true;
    m->components = [r](std::span<const Jet> x) {
      return JetVec{Jet::constant_like(x[0], r * r)};
    };
    s->metric = m;
    s->known_scalar = 0.0;
    s->forms.push_back({"volume", volume_form(m), true, 0, 0.0, nullptr});
    return s;
  }
  s->metric = sphere_metric(n, r);
  s->known_scalar = n * (n - 1) / (r * r);
  s->known_einstein_constant = (n - 1) / (r * r);
  s->known_holonomy_dim = n * (n - 1) / 2;
  s->forms.push_back({"volume", volume_form(s->metric), true, 0, 0.0, nullptr});

  if (std::abs(r - 1.0) < 1e-12 && n >= 2) {
    // A special Killing 1-form: gamma = i*(N . sigma) for a constant ambient
    // 2-form, built with the outward normal (lambda = -1 normalization).
    const MetricPtr flat = euclidean_metric(n + 1);
    Embedding emb = sphere_in_euclidean(n, 1.0, flat);
    orient_for_lambda_sign(emb, -1);
    FormValue sigma_comps(static_cast<std::size_t>(binom(n + 1, 2)), 0.0);
    sigma_comps[0] = 1.0;  // e0 ^ e1
    const FormField sigma = constant_form(n + 1, 2, sigma_comps, flat, "e0^e1");
    FormField gamma = normal_contraction_pullback_field(emb, sigma, s->metric);
    gamma.label = "killing_one_form";
    s->forms.push_back({"killing_one_form", std::move(gamma), false, 2, -1.0,
                        std::make_shared<const FormField>(sigma)});
  }

  // Geodesic spheres around the chart origin, lambda = cot(rho) >= 0.
  if (n >= 2 && std::abs(r - 1.0) < 1e-12) {
    for (const double rho :
         {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2}) {
      Embedding e = geodesic_sphere_in_sphere(n, rho, s->metric);
      orient_for_lambda_sign(e, +1);
      s->umbilical_embeddings.push_back(std::move(e));
    }
  }
  return s;
}

SpecPtr make_flat_torus(int n) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "flat_torus";
  s->params = {{"n", static_cast<double>(n)}};
  s->name = "flat_torus(n=" + std::to_string(n) + ")";
  auto m = std::make_shared<MetricField>();
  m->dim = n;
  m->label = s->name;
  m->domain = ChartDomain::box(Point(static_cast<std::size_t>(n), 0.0),
                               Point(static_cast<std::size_t>(n), 2.0 * std::numbers::pi));
  m->einstein = true;
  m->components = [n](std::span<const Jet> x) {
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i * n + i)] = Jet::constant_like(x[0], 1.0);
    return g;
  };
  s->metric = m;
  s->known_scalar = 0.0;
  s->known_einstein_constant = 0.0;
  s->known_holonomy_dim = 0;
  s->forms.push_back({"volume", volume_form(m), true, 0, 0.0, nullptr});
  // no umbilical canonical embedding: the killing suite reports "degenerate"
  return s;
}

SpecPtr make_sasakian_sphere(int n) {
  if (n != 3)
    throw UnsupportedError("sasakian_sphere: only the 3-sphere entry is built");
  auto s = make_round_sphere(3, 1.0);
  s->kind = "sasakian_sphere";
  s->name = "sasakian_sphere(n=3)";

  const MetricPtr flat = euclidean_metric(4);
  Embedding emb = sphere_in_euclidean(3, 1.0, flat);
  orient_for_lambda_sign(emb, -1);  // outward normal: lambda = -1
  const FormField omega = flat_kahler_form(flat);
  FormField eta = normal_contraction_pullback_field(emb, omega, s->metric);
  eta.label = "eta";
  s->forms.push_back({"contact_form", std::move(eta), false, 2, -1.0,
                      std::make_shared<const FormField>(omega)});

  // Contact condition eta ^ d eta != 0, checked here once at build time.
  const NamedForm& nf = s->forms.back();
  const FormField eta_deta = wedge(nf.field, exterior_derivative(nf.field));
  for (const Point& u : s->samples(5, 29)) {
    const FormValue v = eval_form(eta_deta, u);
    double amp = 0.0;
    for (double x : v) amp = std::max(amp, std::abs(x));
    if (amp < 1e-6)
      throw DomainError(s->name + ": contact condition fails at " + format_point(u));
  }
  return s;
}

SpecPtr make_nearly_kahler_s6() {
  auto s = make_round_sphere(6, 1.0);
  s->kind = "nearly_kahler_s6";
  s->name = "nearly_kahler_s6()";

  const MetricPtr flat7 = euclidean_metric(7);
  const FormField phi = g2_three_form(flat7);
  Embedding emb = sphere_in_euclidean(6, 1.0, flat7);
  orient_for_lambda_sign(emb, -1);  // outward: lambda = -1
  FormField omega = normal_contraction_pullback_field(emb, phi, s->metric);
  omega.label = "omega_nk";
  s->forms.push_back({"nearly_kahler_form", std::move(omega), false, 3, -1.0,
                      std::make_shared<const FormField>(phi)});

  // omega is non-degenerate and not closed (nearly Kaehler, not Kaehler).
  const FormField domega = exterior_derivative(s->forms.back().field);
  const Point probe = s->samples(1, 31).front();
  double amp = 0.0;
  for (double v : eval_form(domega, probe)) amp = std::max(amp, std::abs(v));
  if (amp < 0.1)
    throw DomainError(s->name + ": d(omega) unexpectedly small; structure not nearly Kaehler");
  return s;
}

SpecPtr make_fubini_study_cp2() {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "fubini_study_cp2";
  s->name = "fubini_study_cp2()";
  auto m = std::make_shared<MetricField>();
  m->dim = 4;
  m->label = s->name;
  m->domain = ChartDomain::cube(4, 1.0);
  m->einstein = true;
  // Affine chart of the complex projective plane, real coordinates
  // (x1, y1, x2, y2), Kaehler potential log(1 + |z|^2); holomorphic
  // sectional curvature 4 in this normalization.
  m->components = [](std::span<const Jet> x) {
    const Jet p = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const Jet p2 = p * p;
    // A[j][k] = Re h_{jk}, B[j][k] = Im h_{jk}
    Jet A[2][2], B[2][2];
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Jet& xj = x[static_cast<std::size_t>(2 * j)];
        const Jet& yj = x[static_cast<std::size_t>(2 * j + 1)];
        const Jet& xk = x[static_cast<std::size_t>(2 * k)];
        const Jet& yk = x[static_cast<std::size_t>(2 * k + 1)];
        const Jet re = xj * xk + yj * yk;
        const Jet im = xj * yk - yj * xk;
        A[j][k] = (j == k) ? (1.0 / p - re / p2) : (-(re / p2));
        B[j][k] = -(im / p2);
      }
    JetVec g(16, Jet::constant_like(x[0], 0.0));
    const auto set = [&](int a, int b, const Jet& v) { g[static_cast<std::size_t>(a * 4 + b)] = v; };
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        set(2 * j, 2 * k, A[j][k]);
        set(2 * j + 1, 2 * k + 1, A[j][k]);
        set(2 * j, 2 * k + 1, B[j][k]);
        set(2 * j + 1, 2 * k, -B[j][k]);
      }
    return g;
  };
  s->metric = m;
  s->known_scalar = 24.0;
  s->known_einstein_constant = 6.0;
  s->known_holonomy_dim = 4;

  // Kaehler form: omega(X, Y) = g(JX, Y) with the constant chart J.
  FormField omega;
  omega.dim = 4;
  omega.degree = 2;
  omega.metric = m;
  omega.label = "kahler_form";
  const FieldFn comps = m->components;
  omega.components = [comps](std::span<const Jet> x) {
    const JetVec g = comps(x);
    const auto G = [&](int a, int b) -> const Jet& { return g[static_cast<std::size_t>(a * 4 + b)]; };
    // combos on 4 indices: (01),(02),(03),(12),(13),(23); with J dx_j = dy_j:
    // omega(dx_j, Y) = g(dy_j, Y), omega(dy_j, Y) = -g(dx_j, Y).
    JetVec w;
    w.reserve(6);
    w.push_back(G(1, 1));   // omega(x1, y1)
    w.push_back(G(1, 2));   // omega(x1, x2)
    w.push_back(G(1, 3));   // omega(x1, y2)
    w.push_back(-G(0, 2));  // omega(y1, x2)
    w.push_back(-G(0, 3));  // omega(y1, y2)
    w.push_back(G(3, 3));   // omega(x2, y2)
    return w;
  };
  s->forms.push_back({"kahler_form", omega, true, 0, 0.0, nullptr});
  s->forms.push_back({"volume", volume_form(m), true, 0, 0.0, nullptr});
  return s;
}

SpecPtr make_product(SpecPtr a, SpecPtr b) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "product";
  s->base1 = a;
  s->base2 = b;
  s->name = "product(" + a->name + ", " + b->name + ")";
  auto m = std::make_shared<MetricField>();
  const int n1 = a->metric->dim, n2 = b->metric->dim;
  const int n = n1 + n2;
  m->dim = n;
  m->label = s->name;
  m->domain = ChartDomain::product(a->metric->domain, b->metric->domain);
  m->jet_order_overhead =
      std::max(a->metric->jet_order_overhead, b->metric->jet_order_overhead);
  const MetricPtr ma = a->metric, mb = b->metric;
  m->components = [n1, n2, n, ma, mb](std::span<const Jet> x) {
    const JetVec ga = ma->components(x.subspan(0, static_cast<std::size_t>(n1)));
    const JetVec gb = mb->components(x.subspan(static_cast<std::size_t>(n1), static_cast<std::size_t>(n2)));
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) g[static_cast<std::size_t>(i * n + j)] = ga[static_cast<std::size_t>(i * n1 + j)];
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j)
        g[static_cast<std::size_t>((n1 + i) * n + (n1 + j))] = gb[static_cast<std::size_t>(i * n2 + j)];
    return g;
  };
  s->metric = m;
  if (a->known_scalar && b->known_scalar) s->known_scalar = *a->known_scalar + *b->known_scalar;
  if (a->known_einstein_constant && b->known_einstein_constant &&
      std::abs(*a->known_einstein_constant - *b->known_einstein_constant) < 1e-12) {
    s->known_einstein_constant = *a->known_einstein_constant;
    m->einstein = true;
  } else {
    m->einstein = false;
  }
  if (a->known_holonomy_dim && b->known_holonomy_dim && n1 >= 2 && n2 >= 2)
    s->known_holonomy_dim = *a->known_holonomy_dim + *b->known_holonomy_dim;

  // The factor volume forms, extended to the product: parallel with a
  // nontrivial kernel.
  {
    FormField v1;
    v1.dim = n;
    v1.degree = n1;
    v1.metric = m;
    v1.label = "vol_factor1";
    const MetricPtr base = ma;
    v1.components = [base, n1, n](std::span<const Jet> x) {
      const JetMat g = metric_jets(*base, x.subspan(0, static_cast<std::size_t>(n1)));
      const Jet vol = sqrt(jet_mat_det(g));
      const ComboTable& ct = combo_table(n, n1);
      JetVec out(static_cast<std::size_t>(ct.count()), Jet::constant_like(x[0], 0.0));
      std::vector<int> first(static_cast<std::size_t>(n1));
      for (int i = 0; i < n1; ++i) first[static_cast<std::size_t>(i)] = i;
      out[static_cast<std::size_t>(ct.rank(first))] = vol;
      return out;
    };
    s->forms.push_back({"vol_factor1", std::move(v1), true, 0, 0.0, nullptr});
  }
  return s;
}

bool spec_is_unit_round_sphere(const ManifoldSpec& x) {
  if (x.kind != "round_sphere" && x.kind != "sasakian_sphere" && x.kind != "nearly_kahler_s6")
    return false;
  const auto it = x.params.find("r");
  return it != x.params.end() && std::abs(it->second - 1.0) < 1e-12;
}

SpecPtr make_cone(SpecPtr base) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "cone";
  s->base1 = base;
  s->name = "cone(" + base->name + ")";
  s->metric = cone_metric(base->metric, 0.5, 2.0);
  // Cone over a base with Ric = (n-1) g is Ricci flat; over the unit round
  // sphere it is flat outright (polar coordinates on punctured space).
  const int nb = base->metric->dim;
  if (base->known_einstein_constant &&
      std::abs(*base->known_einstein_constant - (nb - 1)) < 1e-12) {
    s->known_einstein_constant = 0.0;
    s->known_scalar = 0.0;
  }
  if (spec_is_unit_round_sphere(*base)) s->known_holonomy_dim = 0;
  {
    auto writable = std::const_pointer_cast<MetricField>(s->metric);
    writable->einstein = s->known_einstein_constant.has_value();
  }
  Embedding slice = cone_slice_embedding(s->metric, nb, 1.0);
  orient_for_lambda_sign(slice, +1);
  s->umbilical_embeddings.push_back(std::move(slice));
  s->forms.push_back({"volume", volume_form(s->metric), true, 0, 0.0, nullptr});
  return s;
}

SpecPtr make_sine_join(SpecPtr a, SpecPtr b) {
  auto s = std::make_shared<ManifoldSpec>();
  s->kind = "sine_join";
  s->base1 = a;
  s->base2 = b;
  s->name = "sine_join(" + a->name + ", " + b->name + ")";
  s->metric = sine_cone_join(a->metric, b->metric);

  // Join of unit round spheres is the unit round sphere of the total
  // dimension; record the expected scalars in that case.
  const int n = s->metric->dim;
  if (spec_is_unit_round_sphere(*a) && spec_is_unit_round_sphere(*b)) {
    s->known_scalar = static_cast<double>(n) * (n - 1);
    s->known_einstein_constant = static_cast<double>(n - 1);
    if (n >= 2) s->known_holonomy_dim = n * (n - 1) / 2;
    auto writable = std::const_pointer_cast<MetricField>(s->metric);
    writable->einstein = true;
  }
  s->forms.push_back({"volume", volume_form(s->metric), true, 0, 0.0, nullptr});
  // theta-slices of a two-factor join are not umbilical (the two factor
  // blocks carry unequal principal curvatures); the umbilical picture lives
  // one level up, on the r = const slices of the cone over the join.
  return s;
}

}  // namespace

MetricPtr euclidean_metric(int n) {
  auto m = std::make_shared<MetricField>();
  m->dim = n;
  m->label = "euclidean(n=" + std::to_string(n) + ")";
  m->domain = ChartDomain::cube(n, 3.0);
  m->einstein = true;
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
  m->label = "round_sphere(n=" + std::to_string(n) + ",r=" + fmt(r) + ")";
  m->domain = ChartDomain::cube(n, 1.4 * r);
  m->einstein = true;
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

Embedding sphere_in_euclidean(int n, double r, MetricPtr ambient, int orientation) {
  Embedding e;
  e.intrinsic_dim = n;
  e.ambient = std::move(ambient);
  e.orientation = orientation;
  e.label = "S^" + std::to_string(n) + "(r=" + fmt(r) + ") in " + e.ambient->label;
  e.domain = ChartDomain::cube(n, 1.4 * r);
  e.map = [n, r](std::span<const Jet> u) {
    Jet q = Jet::constant_like(u[0], r * r);
    for (int i = 0; i < n; ++i) q = q + u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    JetVec x;
    x.reserve(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) x.push_back(u[static_cast<std::size_t>(i)] * (2.0 * r * r) / q);
    x.push_back((q - 2.0 * r * r) * r / q);  // r (|u|^2 - r^2) / (r^2 + |u|^2)
    return x;
  };
  return e;
}

Embedding geodesic_sphere_in_sphere(int n, double rho, MetricPtr ambient) {
  // Geodesic sphere of angular radius rho around the chart origin of the
  // unit n-sphere: the image of the unit (n-1)-sphere scaled by tan(rho/2)
  // in the stereographic chart.
  Embedding e;
  e.intrinsic_dim = n - 1;
  e.ambient = std::move(ambient);
  e.orientation = 1;
  e.label = "geodesic_sphere(rho=" + fmt(rho) + ") in " + e.ambient->label;
  e.domain = ChartDomain::cube(n - 1, 1.4);
  const double c = std::tan(rho / 2.0);
  const int m = n - 1;
  e.map = [m, c](std::span<const Jet> u) {
    Jet q = Jet::constant_like(u[0], 1.0);
    for (int i = 0; i < m; ++i) q = q + u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    JetVec x;
    x.reserve(static_cast<std::size_t>(m + 1));
    for (int i = 0; i < m; ++i) x.push_back(u[static_cast<std::size_t>(i)] * (2.0 * c) / q);
    x.push_back((q - 2.0) * c / q);  // c (|u|^2 - 1)/(1 + |u|^2)
    return x;
  };
  return e;
}

Embedding flipped(const Embedding& e) {
  Embedding out = e;
  out.orientation = -e.orientation;
  out.label = e.label + " [flipped]";
  return out;
}

FormField g2_three_form(MetricPtr euclidean7) {
  const ComboTable& ct = combo_table(7, 3);
  FormValue comps(static_cast<std::size_t>(ct.count()), 0.0);
  const auto set = [&](int a, int b, int c, double v) {
    const std::vector<int> idx = {a, b, c};
    comps[static_cast<std::size_t>(ct.rank(idx))] = v;
  };
  set(0, 1, 2, 1.0);
  set(0, 3, 4, 1.0);
  set(0, 5, 6, 1.0);
  set(1, 3, 5, 1.0);
  set(1, 4, 6, -1.0);
  set(2, 3, 6, -1.0);
  set(2, 4, 5, -1.0);
  FormField phi = constant_form(7, 3, comps, std::move(euclidean7), "phi_g2");

  // The sign table must define an honest cross product:
  // |x x y|^2 = |x|^2 |y|^2 - <x,y>^2 for all x, y.
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const FormValue phi_v(comps);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(7), y(7);
    for (int i = 0; i < 7; ++i) {
      x[static_cast<std::size_t>(i)] = d(rng);
      y[static_cast<std::size_t>(i)] = d(rng);
    }
    const FormValue xc = interior_components<double>(7, 3, x, phi_v);
    const FormValue cross = interior_components<double>(7, 2, y, xc);  // (x x y)^flat
    double c2 = 0.0, x2 = 0.0, y2 = 0.0, xy = 0.0;
    for (int i = 0; i < 7; ++i) {
      c2 += cross[static_cast<std::size_t>(i)] * cross[static_cast<std::size_t>(i)];
      x2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      y2 += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      xy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    if (std::abs(c2 - (x2 * y2 - xy * xy)) > 1e-10)
      throw DomainError("g2_three_form: cross product norm identity fails; bad sign table");
  }
  return phi;
}

std::vector<std::string> names() {
  return {"euclidean",        "round_sphere", "flat_torus",
          "sasakian_sphere",  "nearly_kahler_s6", "fubini_study_cp2",
          "product",          "cone",         "sine_join"};
}

SpecPtr build(const std::string& kind, const std::map<std::string, double>& params,
              std::vector<SpecPtr> bases) {
  const auto geti = [&](const std::string& key, int def) {
    auto it = params.find(key);
    return it == params.end() ? def : static_cast<int>(it->second);
  };
  const auto getd = [&](const std::string& key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };

  SpecPtr s;
  if (kind == "euclidean") {
    const int n = geti("n", 3);
    if (n < 2 || n > 10) throw DomainError("euclidean: dimension must be in 2..10");
    s = make_euclidean(n);
  } else if (kind == "round_sphere" || kind == "circle") {
    const int n = kind == "circle" ? 1 : geti("n", 3);
    if (n < 1 || n > 9) throw DomainError("round_sphere: dimension must be in 1..9");
    s = make_round_sphere(n, getd("r", 1.0));
  } else if (kind == "flat_torus") {
    const int n = geti("n", 2);
    if (n < 1 || n > 10) throw DomainError("flat_torus: dimension must be in 1..10");
    s = make_flat_torus(n);
  } else if (kind == "sasakian_sphere") {
    s = make_sasakian_sphere(geti("n", 3));
  } else if (kind == "nearly_kahler_s6") {
    s = make_nearly_kahler_s6();
  } else if (kind == "fubini_study_cp2") {
    s = make_fubini_study_cp2();
  } else if (kind == "product") {
    if (bases.size() != 2) throw DomainError("product: needs two base specs");
    s = make_product(bases[0], bases[1]);
  } else if (kind == "cone") {
    if (bases.size() != 1) throw DomainError("cone: needs one base spec");
    s = make_cone(bases[0]);
  } else if (kind == "sine_join") {
    if (bases.size() != 2) throw DomainError("sine_join: needs two base specs");
    s = make_sine_join(bases[0], bases[1]);
  } else if (kind == "hp2") {
    throw UnsupportedError(
        "hp2: quaternionic projective plane entry is a stretch item not built in this version");
  } else {
    throw DomainError("unknown zoo entry: " + kind);
  }
  if (s->metric->dim > 10) throw DomainError(s->name + ": dimension overflow (max 10)");
  validate(*s);
  return s;
}

namespace {

struct Parser {
  std::string text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
  SpecPtr parse_spec() {
    const std::string kind = ident();
    if (kind.empty()) throw DomainError("zoo parser: expected a name at position " +
                                        std::to_string(pos) + " in '" + text + "'");
    std::map<std::string, double> params;
    std::vector<SpecPtr> bases;
    if (eat('(')) {
      skip_ws();
      if (!eat(')')) {
        do {
          skip_ws();
          const std::size_t mark = pos;
          const std::string word = ident();
          skip_ws();
          if (pos < text.size() && text[pos] == '=') {
            ++pos;
            skip_ws();
            std::size_t consumed = 0;
            const double v = std::stod(text.substr(pos), &consumed);
            pos += consumed;
            params[word] = v;
          } else {
            pos = mark;
            bases.push_back(parse_spec());
          }
        } while (eat(','));
        if (!eat(')')) throw DomainError("zoo parser: expected ')' in '" + text + "'");
      }
    }
    return zoo::build(kind, params, std::move(bases));
  }
};

}  // namespace

SpecPtr build_from_string(const std::string& expr) {
  Parser p{expr, 0};
  SpecPtr s = p.parse_spec();
  p.skip_ws();
  if (p.pos != expr.size())
    throw DomainError("zoo parser: trailing input in '" + expr + "'");
  return s;
}

namespace {

SpecPtr spec_from_json(const nlohmann::json& j) {
  if (!j.contains("name")) throw DomainError("spec file: missing 'name'");
  const std::string kind = j.at("name").get<std::string>();
  std::map<std::string, double> params;
  std::vector<SpecPtr> bases;
  if (j.contains("params")) {
    for (const auto& [key, value] : j.at("params").items()) {
      if (value.is_object())
        bases.push_back(spec_from_json(value));
      else
        params[key] = value.get<double>();
    }
  }
  return zoo::build(kind, params, std::move(bases));
}

}  // namespace

SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spec file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DomainError("spec file parse error: " + std::string(e.what()));
  }
  SpecFile out;
  out.spec = spec_from_json(j);
  if (j.contains("orientation")) {
    const int o = j.at("orientation").get<int>();
    std::const_pointer_cast<MetricField>(out.spec->metric)->orientation = o >= 0 ? 1 : -1;
  }
  if (j.contains("sample_count")) out.sample_count = j.at("sample_count").get<int>();
  if (j.contains("seed")) out.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tolerance_overrides"))
    for (const auto& [key, value] : j.at("tolerance_overrides").items())
      out.tolerance_overrides[key] = value.get<double>();
  return out;
}

const std::vector<Embedding>& canonical_umbilical_embeddings(const ManifoldSpec& spec) {
  return spec.umbilical_embeddings;
}

}  // namespace umb::zoo
