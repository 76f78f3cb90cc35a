#include "umb/suites.hpp"

#include <cmath>
#include <fstream>

#include "umb/cones.hpp"
#include "umb/curvature.hpp"
#include "umb/holonomy.hpp"
#include "umb/killing.hpp"

namespace umb {

namespace {

class RowSink {
public:
  RowSink(VerificationReport& rep, const SuiteOptions& opt) : rep_(rep), opt_(opt) {}

  double tol(const std::string& id, double def) const {
    auto it = opt_.tolerance_overrides.find(id);
    if (it != opt_.tolerance_overrides.end()) return it->second;
    it = opt_.tolerance_overrides.find("*");
    if (it != opt_.tolerance_overrides.end()) return it->second;
    return def;
  }

  void add(const std::string& id, const std::string& anchor, const std::string& subject,
           const ResidualSummary& s, double def_tol, bool degenerate = false,
           const std::string& note = "") {
    ReportRow r;
    r.id = id;
    r.anchor = anchor;
    r.subject = subject;
    r.max = s.max;
    r.mean = s.mean;
    r.samples = s.count;
    r.tolerance = tol(id, def_tol);
    r.pass = !degenerate && s.max <= r.tolerance;
    r.status = degenerate ? "degenerate" : (s.max <= r.tolerance ? "pass" : "fail");
    r.note = note.empty() ? s.note : note;
    rep_.rows.push_back(std::move(r));
  }

  void add_value(const std::string& id, const std::string& anchor, const std::string& subject,
                 double value, std::size_t count, double def_tol, bool degenerate = false,
                 const std::string& note = "") {
    ResidualSummary s;
    s.max = value;
    s.mean = value;
    s.count = count;
    add(id, anchor, subject, s, def_tol, degenerate, note);
  }

  void info(const std::string& id, const std::string& anchor, const std::string& subject,
            double value, const std::string& note = "") {
    ReportRow r;
    r.id = id;
    r.anchor = anchor;
    r.subject = subject;
    r.max = value;
    r.mean = value;
    r.samples = 1;
    r.tolerance = 0.0;
    r.pass = false;
    r.status = "info";
    r.note = note;
    rep_.rows.push_back(std::move(r));
  }

private:
  VerificationReport& rep_;
  const SuiteOptions& opt_;
};

VerificationReport make_report(const std::string& suite, const zoo::ManifoldSpec& spec,
                               const SuiteOptions& opt) {
  VerificationReport rep;
  rep.suite = suite;
  rep.manifold = spec.name;
  rep.seed = opt.seed;
  rep.sample_count = static_cast<int>(opt.samples);
  rep.tolerance_overrides = opt.tolerance_overrides;
  return rep;
}

double riemann_symmetry_residual(const CurvatureAtPoint& c) {
  const int n = c.dim;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          worst = std::max(worst, std::abs(c.rm(i, j, k, l) + c.rm(j, i, k, l)));
          worst = std::max(worst, std::abs(c.rm(i, j, k, l) + c.rm(i, j, l, k)));
          worst = std::max(worst, std::abs(c.rm(i, j, k, l) - c.rm(k, l, i, j)));
        }
  return worst;
}

double bianchi_residual(const CurvatureAtPoint& c) {
  const int n = c.dim;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst,
                           std::abs(c.rm(i, j, k, l) + c.rm(j, k, i, l) + c.rm(k, i, j, l)));
  return worst;
}

/// Pullback of a constant ambient form through Phi(u, t) = t x(u), where x is
/// the unit-sphere chart map; evaluated at one cone chart point.
FormValue cone_model_pullback(const Embedding& sphere, const FormField& sigma,
                              const Point& cone_point) {
  const int n = sphere.intrinsic_dim;  // cone chart dim = n + 1
  const int na = n + 1;
  const JetVec cjets = lift_point(cone_point, 1);
  const JetVec xu = sphere.map(std::span<const Jet>(cjets.data(), static_cast<std::size_t>(n)));
  JetVec phi;
  phi.reserve(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al)
    phi.push_back(xu[static_cast<std::size_t>(al)] * cjets[static_cast<std::size_t>(n)]);

  const int k = sigma.degree;
  const FormValue sig = eval_form(sigma, Point(static_cast<std::size_t>(na), 0.0));
  const ComboTable& ct_src = combo_table(na, k);  // cone chart combos
  const ComboTable& ct_amb = combo_table(na, k);
  FormValue out(static_cast<std::size_t>(ct_src.count()), 0.0);
  Eigen::MatrixXd dphi(na, na);  // rows: cone directions, cols: ambient
  for (int a = 0; a < na; ++a)
    for (int al = 0; al < na; ++al) dphi(a, al) = phi[static_cast<std::size_t>(al)].d1(a);
  Eigen::MatrixXd minor(k, k);
  for (int r = 0; r < ct_src.count(); ++r) {
    const auto& I = ct_src.combo(r);
    double s = 0.0;
    for (int c = 0; c < ct_amb.count(); ++c) {
      const auto& J = ct_amb.combo(c);
      if (sig[static_cast<std::size_t>(c)] == 0.0) continue;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = dphi(I[static_cast<std::size_t>(i)], J[static_cast<std::size_t>(j)]);
      s += sig[static_cast<std::size_t>(c)] * minor.determinant();
    }
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

bool unit_sphere_kind(const zoo::ManifoldSpec& spec) {
  if (spec.kind != "round_sphere" && spec.kind != "sasakian_sphere" &&
      spec.kind != "nearly_kahler_s6")
    return false;
  const auto it = spec.params.find("r");
  return it != spec.params.end() && std::abs(it->second - 1.0) < 1e-12;
}

}  // namespace

VerificationReport fundamental_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt) {
  VerificationReport rep = make_report("fundamental", spec, opt);
  RowSink sink(rep, opt);
  const MetricField& m = *spec.metric;
  const int n = m.dim;
  const std::vector<Point> samples = spec.samples(opt.samples, opt.seed);

  sink.add("metric.symmetry", "g_ij = g_ji", spec.name,
           sweep_residual(samples, opt.exec,
                          [&](const Point& u) {
                            const MetricAtPoint mv = metric_values(m, u);
                            double worst = 0.0;
                            for (int i = 0; i < n; ++i)
                              for (int j = 0; j < n; ++j)
                                worst = std::max(worst,
                                                 std::abs(mv.g[static_cast<std::size_t>(i * n + j)] -
                                                          mv.g[static_cast<std::size_t>(j * n + i)]));
                            return worst;
                          }),
           1e-12);

  sink.add("metric.positive_definite", "g positive definite (smallest eigenvalue > 0)",
           spec.name,
           sweep_residual(samples, opt.exec,
                          [&](const Point& u) {
                            const MetricAtPoint mv = metric_values(m, u);
                            Eigen::MatrixXd g(n, n);
                            for (int i = 0; i < n; ++i)
                              for (int j = 0; j < n; ++j)
                                g(i, j) = mv.g[static_cast<std::size_t>(i * n + j)];
                            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
                            return std::max(0.0, -es.eigenvalues()(0));
                          }),
           1e-12);

  if (n >= 2) {
    sink.add("riemann.symmetries", "R_ijkl index symmetries", spec.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) {
                              return riemann_symmetry_residual(curvature(m, u));
                            }),
             1e-9);
    sink.add("riemann.first_bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", spec.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) { return bianchi_residual(curvature(m, u)); }),
             1e-9);
    sink.add("ricci.consistency", "Ricci two routes; trace equals scalar", spec.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) {
                              const CurvatureAtPoint c = curvature(m, u);
                              const std::vector<double> direct = ricci_direct(m, u);
                              double worst = 0.0;
                              for (std::size_t t = 0; t < direct.size(); ++t)
                                worst = std::max(worst, std::abs(direct[t] - c.ricci[t]));
                              double tr = 0.0;
                              for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j)
                                  tr += c.ginv[static_cast<std::size_t>(i * n + j)] *
                                        c.ricci[static_cast<std::size_t>(i * n + j)];
                              return std::max(worst, std::abs(tr - c.scalar) /
                                                         std::max(1.0, std::abs(c.scalar)));
                            }),
             1e-10);
  }

  if (m.einstein && n >= 2)
    sink.add("einstein.traceless_ricci", "Ric = (scal/n) g", spec.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) {
                              const CurvatureAtPoint c = curvature(m, u);
                              double worst = 0.0;
                              for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j)
                                  worst = std::max(
                                      worst, std::abs(c.ricci[static_cast<std::size_t>(i * n + j)] -
                                                      (c.scalar / n) *
                                                          c.g[static_cast<std::size_t>(i * n + j)]));
                              return worst;
                            }),
             1e-8);

  if (spec.known_scalar && n >= 2)
    sink.add("known.scalar_curvature",
             "scalar curvature matches the catalogue value", spec.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) {
                              return std::abs(curvature(m, u).scalar - *spec.known_scalar);
                            }),
             1e-7);

  for (const zoo::NamedForm& nf : spec.forms) {
    if (!nf.expect_parallel) continue;
    sink.add("forms.parallel", "nabla sigma = 0", nf.name,
             sweep_residual(samples, opt.exec,
                            [&](const Point& u) {
                              const std::vector<double> nt = nabla_form_tensor(nf.field, u);
                              double worst = 0.0;
                              for (double v : nt) worst = std::max(worst, std::abs(v));
                              return worst;
                            }),
             1e-8);
  }

  for (const Embedding& e : spec.umbilical_embeddings) {
    const std::vector<Point> su = sample_points(e.domain, opt.samples, opt.seed);
    sink.add("embed.umbilicity", "II - (tr II / n) g = 0", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) { return umbilicity_residual(e, u); }),
             1e-9);
    sink.add("embed.shape_duality", "gbar(II(X,Y),N) = g(A X, Y)", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) {
                              return second_fundamental_form(e, u).shape_duality_residual;
                            }),
             1e-10);
    sink.add("embed.frame_equations",
             "nablabar_X Y = nabla_X Y + lambda g(X,Y) N; nablabar_X N = -lambda X", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) {
                              const FrameEquationResult r = frame_equation_residual(e, u);
                              return std::max(r.tangent_residual, r.normal_residual);
                            }),
             1e-8);
    sink.add("embed.gauss",
             "Rbar(X,Y,Z,W) = R(X,Y,Z,W) + lambda^2 g(X^Y, Z^W)", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) { return gauss_residual(e, u).max; }),
             1e-7);
    sink.add("embed.codazzi", "Rbar(X,Y,Z,N) = (dlambda ^ Z)(X,Y)", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) { return codazzi_residual(e, u).full.max; }),
             1e-7);
    sink.add("embed.codazzi_traced", "Ricbar(X,N) = (n-1) dlambda(X)", e.label,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) { return codazzi_residual(e, u).traced.max; }),
             1e-7);
    if (e.ambient->einstein && e.intrinsic_dim >= 2) {
      const EinsteinLambdaResult r = einstein_lambda_check(e, su);
      sink.add("embed.einstein_lambda",
               "lambda^2 = scal_g/(n(n-1)) - scal_gbar/(n(n+1))", e.label, r.formula, 1e-7);
      sink.add_value("embed.lambda_constant", "lambda constant on samples", e.label,
                     r.lambda_spread, su.size(), 1e-7);
      sink.add_value("embed.scalar_constant", "scal_g constant on samples", e.label,
                     r.scalar_spread, su.size(), 1e-7);
      sink.add_value("embed.scalar_inequality", "(n+1) scal_g >= (n-1) scal_gbar", e.label,
                     r.inequality_holds ? 0.0 : 1.0, su.size(), 0.5);
    }
  }

  rep.finalize();
  return rep;
}

VerificationReport killing_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt) {
  VerificationReport rep = make_report("killing", spec, opt);
  RowSink sink(rep, opt);

  if (spec.umbilical_embeddings.empty()) {
    sink.info("killing.degenerate", "no umbilical canonical embedding in the catalogue",
              spec.name, 0.0,
              "the special Killing identities need an extrinsic hypersphere to restrict to");
    rep.finalize();
    return rep;
  }

  // Ambient parallel forms to restrict: the full constant basis on flat
  // charts, the flagged parallel forms elsewhere.
  std::vector<FormField> sigmas;
  if (spec.kind == "euclidean") {
    const int n = spec.metric->dim;
    for (int k = 1; k <= n; ++k) {
      const long C = binom(n, k);
      for (long which = 0; which < C; ++which) {
        FormValue comps(static_cast<std::size_t>(C), 0.0);
        comps[static_cast<std::size_t>(which)] = 1.0;
        const auto& combo = combo_table(n, k).combo(static_cast<int>(which));
        std::string label = "e" + std::to_string(combo[0]);
        for (int t = 1; t < k; ++t) label += "^e" + std::to_string(combo[static_cast<std::size_t>(t)]);
        sigmas.push_back(constant_form(n, k, comps, spec.metric, label));
      }
    }
  } else {
    for (const zoo::NamedForm& nf : spec.forms)
      if (nf.expect_parallel) sigmas.push_back(nf.field);
  }

  for (const Embedding& e : spec.umbilical_embeddings) {
    const std::vector<Point> su = sample_points(e.domain, opt.samples, opt.seed);
    // the flat-chart unit sphere has a closed-form intrinsic metric
    MetricPtr intrinsic = nullptr;
    if (spec.kind == "euclidean") intrinsic = zoo::sphere_metric(e.intrinsic_dim, 1.0);

    for (const FormField& sigma : sigmas) {
      const std::string subject = sigma.label + " @ " + e.label;
      KillingCandidate c;
      try {
        c = candidate_from_parallel_form(e, sigma, su, intrinsic);
      } catch (const PreconditionError& err) {
        sink.add_value("killing.candidate", "pull-back pair construction", subject, 1.0,
                       su.size(), 0.5, false, err.what());
        continue;
      }
      const bool deg = c.degenerate;
      const std::string note = deg ? "degenerate: gamma or beta vanishes along the samples" : "";

      const KillingResiduals kr = special_killing_residuals(c, su, opt.exec);
      sink.add("sk.i", "nabla_X gamma = (1/k) X . d gamma", subject, kr.grad_gamma, 1e-8, deg,
               note);
      sink.add("sk.ii", "nabla_X d gamma = -k lambda^2 X ^ gamma", subject, kr.grad_dgamma,
               1e-8, deg, note);
      sink.add("sk.iii", "nabla_X beta = -(1/(n-k+1)) X ^ d* beta", subject, kr.grad_beta,
               1e-8, deg, note);
      sink.add("sk.iv", "nabla_X d* beta = (n-k+1) lambda^2 X . beta", subject,
               kr.grad_dstar_beta, 1e-8, deg, note);
      sink.add("sk.beta_closed", "d beta = 0", subject, kr.beta_closed, 1e-8, deg, note);
      sink.add("sk.gamma_coclosed", "d* gamma = 0", subject, kr.gamma_coclosed, 1e-8, deg,
               note);

      const RelationResiduals rel = relation_check(c, su, opt.exec);
      sink.add("rel.dgamma", "d gamma = -k lambda beta", subject, rel.dgamma_relation, 1e-8,
               deg, note);
      sink.add("rel.dstar_beta", "d* beta = -(n-k+1) lambda gamma", subject,
               rel.dstar_beta_relation, 1e-8, deg, note);

      if (!deg) {
        const NonParallelResult np = non_parallel_check(c, su);
        sink.info("killing.non_parallel", "gamma is not parallel", subject,
                  np.max_gradient,
                  np.non_parallel ? "non-parallel, witness " + format_point(np.witness)
                                  : "parallel (degenerate restriction)");
      }
    }
  }
  rep.finalize();
  return rep;
}

VerificationReport cone_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt) {
  VerificationReport rep = make_report("cone", spec, opt);
  RowSink sink(rep, opt);

  // Given a cone entry, run the suite on that cone and the structure of its
  // base; otherwise build the cone over the entry.
  const zoo::ManifoldSpec& base = spec.kind == "cone" && spec.base1 ? *spec.base1 : spec;
  const int n = base.metric->dim;
  const MetricPtr cone =
      spec.kind == "cone" ? spec.metric : cone_metric(base.metric, 0.5, 2.0);
  const std::vector<Point> cone_samples = sample_points(cone->domain, opt.samples, opt.seed);

  // t = 1 slice is an extrinsic hypersphere with lambda^2 = 1.
  {
    Embedding slice = cone_slice_embedding(cone, n, 1.0);
    const std::vector<Point> su = sample_points(slice.domain, opt.samples, opt.seed);
    sink.add("cone.slice_umbilicity", "t = 1 slice is totally umbilical", base.name,
             sweep_residual(su, opt.exec,
                            [&](const Point& u) { return umbilicity_residual(slice, u); }),
             1e-9);
    double lam_min = 1e30, lam_max = -1e30;
    const std::vector<double> lams =
        sweep_values(su, opt.exec, [&](const Point& u) {
          return second_fundamental_form(slice, u).lambda_estimate;
        });
    ResidualSummary lamsq;
    for (std::size_t i = 0; i < su.size(); ++i) {
      lamsq.absorb(std::abs(lams[i] * lams[i] - 1.0), su[i]);
      lam_min = std::min(lam_min, lams[i]);
      lam_max = std::max(lam_max, lams[i]);
    }
    sink.add("cone.slice_lambda_sq", "slice lambda^2 = 1", base.name, lamsq, 1e-7);
    sink.add_value("cone.slice_lambda_constant", "slice lambda constant", base.name,
                   lam_max - lam_min, su.size(), 1e-9);
  }

  if (base.known_einstein_constant &&
      std::abs(*base.known_einstein_constant - (n - 1)) < 1e-12) {
    sink.add("cone.ricci_flat", "cone over a normalized Einstein base is Ricci flat",
             base.name,
             sweep_residual(cone_samples, opt.exec,
                            [&](const Point& x) {
                              const CurvatureAtPoint c = curvature(*cone, x);
                              double worst = 0.0;
                              for (double v : c.ricci) worst = std::max(worst, std::abs(v));
                              return worst;
                            }),
             1e-7);
  }

  if (unit_sphere_kind(base)) {
    sink.add("cone.flatness", "cone over the unit sphere is flat", base.name,
             sweep_residual(cone_samples, opt.exec,
                            [&](const Point& x) {
                              const CurvatureAtPoint c = curvature(*cone, x);
                              double worst = 0.0;
                              for (double v : c.riemann) worst = std::max(worst, std::abs(v));
                              return worst;
                            }),
             1e-8);
  }

  for (const zoo::NamedForm& nf : base.forms) {
    if (nf.special_killing_k == 0) continue;
    // normalize lambda^2 to 1 (rescaling the base metric when needed, and
    // recording the scale in the row)
    KillingCandidate cand;
    cand.gamma = nf.field;
    cand.k = nf.special_killing_k;
    cand.lambda = nf.killing_lambda;
    cand.metric = base.metric;
    const ConeNormalized norm = normalized_for_cone(cand);
    const MetricPtr lift_cone =
        norm.metric_scale == 1.0 ? cone : cone_metric(norm.scaled_metric, 0.5, 2.0);
    const FormField lifted = cone_lift(norm.psi, cand.k, lift_cone, norm.lambda);
    const std::string scale_note =
        norm.metric_scale == 1.0
            ? ""
            : "base metric rescaled by lambda^2 = " + std::to_string(norm.metric_scale);
    sink.add("cone.lift_parallel", "nabla (cone lift) = 0", nf.name,
             cone_lift_parallel_residual(lifted, cone_samples, opt.exec), 1e-7, false,
             scale_note);

    if (nf.cone_reference && unit_sphere_kind(base)) {
      const MetricPtr flat = zoo::euclidean_metric(n + 1);
      Embedding sphere = zoo::sphere_in_euclidean(n, 1.0, flat);
      // outward normal matches the lambda = -1 lift normalization
      if (second_fundamental_form(sphere, sample_points(sphere.domain, 1, 7)[0])
              .lambda_estimate > 0)
        sphere = zoo::flipped(sphere);
      const FormField reference = *nf.cone_reference;
      sink.add("cone.lift_matches_reference",
               "cone lift equals the flat model under (u,t) -> t x(u)", nf.name,
               sweep_residual(cone_samples, opt.exec,
                              [&](const Point& x) {
                                const FormValue lv = eval_form(lifted, x);
                                const FormValue mv = cone_model_pullback(sphere, reference, x);
                                double worst = 0.0;
                                for (std::size_t t = 0; t < lv.size(); ++t)
                                  worst = std::max(worst, std::abs(lv[t] - mv[t]));
                                return worst;
                              }),
               1e-7);
    }
  }

  rep.finalize();
  return rep;
}

VerificationReport all_suites(const zoo::ManifoldSpec& spec, const SuiteOptions& opt) {
  VerificationReport rep = make_report("all", spec, opt);
  using SuiteFn = VerificationReport (*)(const zoo::ManifoldSpec&, const SuiteOptions&);
  for (SuiteFn part : {&fundamental_suite, &killing_suite, &cone_suite}) {
    const VerificationReport sub = part(spec, opt);
    rep.rows.insert(rep.rows.end(), sub.rows.begin(), sub.rows.end());
  }
  rep.finalize();
  return rep;
}

VerificationReport holonomy_report(const zoo::ManifoldSpec& spec, int degree,
                                   const SuiteOptions& opt) {
  VerificationReport rep = make_report("holonomy", spec, opt);
  RowSink sink(rep, opt);
  const MetricField& m = *spec.metric;
  const int n = m.dim;
  const Point base = spec.samples(1, opt.seed).front();

  const int span = curvature_span_dimension(m, base, false);
  if (spec.known_holonomy_dim) {
    sink.add_value("holonomy.algebra_dim",
                   "estimated holonomy algebra dimension (curvature span)", spec.name,
                   std::abs(span - *spec.known_holonomy_dim), 1, 0.5, false,
                   "estimate " + std::to_string(span) + ", expected " +
                       std::to_string(*spec.known_holonomy_dim));
  } else {
    sink.info("holonomy.algebra_dim",
              "estimated holonomy algebra dimension (curvature span)", spec.name, span,
              "no catalogue expectation; estimate only");
  }

  const std::vector<LoopSpec> loops = standard_loop_family(m, base, opt.seed);
  sink.info("holonomy.loop_rank", "rank of loop-transport deviations", spec.name,
            loop_holonomy_rank(m, loops), std::to_string(loops.size()) + " loops");

  // transport around each loop is a g-isometry
  {
    const MetricAtPoint mv = metric_values(m, base);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = mv.g[static_cast<std::size_t>(i * n + j)];
    std::vector<double> errs(loops.size());
    for_each_index(loops.size(), opt.exec, [&](std::size_t i) {
      const Eigen::MatrixXd h = parallel_transport_matrix(m, loops[i]);
      errs[i] = (h.transpose() * g * h - g).cwiseAbs().maxCoeff();
    });
    ResidualSummary s;
    for (std::size_t i = 0; i < loops.size(); ++i) s.absorb(errs[i], base);
    sink.add("holonomy.loop_isometry", "loop transport preserves the metric", spec.name, s,
             1e-6);
  }

  const FixedFormSubspace fs = fixed_form_subspace(m, loops, degree, opt.exec);
  sink.info("holonomy.fixed_subspace_dim",
            "dimension of the transport-fixed " + std::to_string(degree) + "-form subspace",
            spec.name, fs.dimension,
            "threshold " + std::to_string(fs.tolerance_used));
  if (fs.dimension > 0) {
    ResidualSummary s;
    for (double v : fs.nabla_residuals) s.absorb(v, base);
    sink.add("holonomy.fixed_nabla_residual",
             "fixed directions extend to nabla-parallel fields", spec.name, s, 1e-5);
  }

  rep.finalize();
  return rep;
}

SearchConfig search_config_from_json(const nlohmann::json& j) {
  SearchConfig cfg;
  cfg.family = j.at("family").get<std::string>();
  cfg.param_dim = j.value("param_dim", 8);
  cfg.opt.budget = j.value("budget", 2000);
  cfg.opt.seed = j.value("seed", std::uint64_t{0});
  cfg.opt.start_radius = j.value("start_radius", 0.2);
  cfg.opt.sample_count = j.value("sample_count", 40);
  cfg.opt.sample_seed = j.value("sample_seed", std::uint64_t{1});
  if (j.contains("thresholds"))
    cfg.opt.converge_threshold = j.at("thresholds").value("converge", 1e-6);
  cfg.exploratory = j.value("exploratory", false);
  return cfg;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open search config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DomainError("search config parse error: " + std::string(e.what()));
  }
  return search_config_from_json(j);
}

nlohmann::json search_result_json(const SearchConfig& cfg, const SearchResult& result) {
  return nlohmann::json{
      {"schema_version", 1},
      {"family", cfg.family},
      {"config",
       {{"param_dim", cfg.param_dim},
        {"budget", cfg.opt.budget},
        {"seed", cfg.opt.seed},
        {"start_radius", cfg.opt.start_radius},
        {"sample_count", cfg.opt.sample_count},
        {"sample_seed", cfg.opt.sample_seed},
        {"converge_threshold", cfg.opt.converge_threshold}}},
      {"verdict", result.verdict},
      {"exploratory", cfg.exploratory},
      {"best_objective", result.best_objective},
      {"best_params", result.best_params},
      {"evaluations", result.evaluations},
      {"budget_exhausted", result.budget_exhausted},
      {"trace", result.trace},
      {"environment", {{"version", kVersion}}}};
}

std::string search_result_markdown(const SearchConfig& cfg, const SearchResult& result) {
  std::ostringstream os;
  os << "# umbilic search: " << cfg.family << "\n\n";
  os << "| field | value |\n|---|---|\n";
  os << "| verdict | " << result.verdict << (cfg.exploratory ? " (exploratory)" : "")
     << " |\n";
  os.precision(6);
  os << std::scientific;
  os << "| best objective | " << result.best_objective << " |\n";
  os << "| evaluations | " << result.evaluations << " |\n";
  os << "| iterations traced | " << result.trace.size() << " |\n";
  if (cfg.exploratory)
    os << "\nExploratory probe: the floor value is reported as data; no"
          " existence or nonexistence claim is attached to it.\n";
  return os.str();
}

}  // namespace umb
