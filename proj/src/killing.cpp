#include "umb/killing.hpp"

#include <cmath>

namespace umb {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_jets(const JetVec& v) {
  double m = 0.0;
  for (const Jet& x : v) m = std::max(m, std::abs(x.value()));
  return m;
}

// Metric dual of the m-th coordinate direction as a 1-form component vector.
std::vector<double> coordinate_covector(const JetMat& g, int n, int m) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = g.at(i, m).value();
  return out;
}

std::vector<double> values_of(const JetVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t t = 0; t < v.size(); ++t) out[t] = v[t].value();
  return out;
}

/// Everything the identity checks need at one point, produced from a single
/// evaluation of gamma and beta at order 2 plus the metric at order 2.
struct PointData {
  int n = 0;
  JetVec gamma_jets;  // order 2
  JetVec beta_jets;   // order 2
  JetMat g;           // order 2
  JetMat ginv;
  JetVec christoffel;  // order 1
};

PointData point_data(const KillingCandidate& c, const Point& u) {
  PointData d;
  d.n = c.metric->dim;
  const int lift =
      2 + std::max({c.gamma.jet_order_overhead, c.beta.jet_order_overhead,
                    c.metric->jet_order_overhead});
  if (c.source_embedding && c.source_sigma) {
    // fused route: one map/normal evaluation serves both pull-backs
    const JetVec ujets = lift_point(u, 3);
    const Embedding& e = *c.source_embedding;
    const int na = e.intrinsic_dim + 1;
    const MapWithNormal mw = map_with_normal(e, ujets);
    Point x0(static_cast<std::size_t>(na));
    for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = mw.x[static_cast<std::size_t>(al)].value();
    // gamma and beta only need order 2; the pull-back minors already truncate
    // there, so compose sigma at order 2 as well.
    JetVec x_lo;
    x_lo.reserve(mw.x.size());
    for (const Jet& xj : mw.x) x_lo.push_back(xj.truncated(2));
    const JetVec sig_amb = eval_form_jets(
        *c.source_sigma, lift_point(x0, 2 + c.source_sigma->jet_order_overhead));
    JetVec sig_at_x;
    sig_at_x.reserve(sig_amb.size());
    for (const Jet& s : sig_amb) sig_at_x.push_back(compose(s, x_lo));
    const JetVec ncontr = interior_components<Jet>(na, c.k, mw.normal, sig_at_x);
    d.gamma_jets = pullback_components(d.n, c.k - 1, ncontr, mw.tangents);
    d.beta_jets = pullback_components(d.n, c.k, sig_at_x, mw.tangents);
    const JetVec mjets = lift_point(u, 2 + c.metric->jet_order_overhead);
    d.g = metric_jets(*c.metric, mjets);
  } else {
    const JetVec coords = lift_point(u, lift);
    d.gamma_jets = eval_form_jets(c.gamma, coords);
    d.beta_jets = eval_form_jets(c.beta, coords);
    d.g = metric_jets(*c.metric, coords);
  }
  d.ginv = jet_mat_inverse(d.g);
  d.christoffel = christoffel_jets(d.g, d.ginv);
  return d;
}

/// d* of a form given its covariant-derivative jets: -g^{ab} (nabla_a)_{b J}.
JetVec codifferential_jets(int n, int k, const JetVec& nabla, const JetMat& ginv) {
  const ComboTable& ct_in = combo_table(n, k);
  const ComboTable& ct_out = combo_table(n, k - 1);
  const long C = ct_in.count();
  JetVec out;
  out.reserve(static_cast<std::size_t>(ct_out.count()));
  std::vector<int> tuple(static_cast<std::size_t>(k));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& J = ct_out.combo(r);
    Jet s = nabla.empty() ? ginv.at(0, 0) * 0.0 : nabla[0] * 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        tuple[0] = b;
        for (int t = 0; t < k - 1; ++t) tuple[static_cast<std::size_t>(t + 1)] = J[static_cast<std::size_t>(t)];
        const auto rs = ct_in.rank_signed(tuple);
        if (rs.sign == 0) continue;
        const Jet term = ginv.at(a, b) * nabla[static_cast<std::size_t>(a * C + rs.rank)];
        s = (rs.sign > 0) ? s - term : s + term;
      }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

KillingCandidate candidate_from_parallel_form(const Embedding& e, const FormField& sigma,
                                              const std::vector<Point>& samples,
                                              MetricPtr intrinsic_metric) {
  KillingCandidate c;
  c.k = sigma.degree;
  c.metric = intrinsic_metric ? intrinsic_metric : induced_metric_field(e);
  c.label = sigma.label + " along " + e.label;

  // The umbilicity gate and lambda constancy are properties of the embedding
  // alone; a spread of probes suffices here (the suites sweep the full sample
  // set separately).
  double lam_min = 0.0, lam_max = 0.0;
  bool first = true;
  double gamma_amp = 0.0, beta_amp = 0.0;
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 8);
  for (std::size_t i = 0; i < samples.size(); i += stride) {
    const Point& u = samples[i];
    const double umb = umbilicity_residual(e, u);
    if (umb > kUmbilicGate)
      throw PreconditionError("candidate_from_parallel_form: embedding not umbilical at " +
                              format_point(u));
    const HypersurfacePointData d = second_fundamental_form(e, u);
    if (first) {
      lam_min = lam_max = d.lambda_estimate;
      first = false;
    } else {
      lam_min = std::min(lam_min, d.lambda_estimate);
      lam_max = std::max(lam_max, d.lambda_estimate);
    }
    const PullbackPair p = pullback_forms(e, sigma, u);
    gamma_amp = std::max(gamma_amp, max_abs(p.gamma));
    beta_amp = std::max(beta_amp, max_abs(p.beta));
  }
  if (lam_max - lam_min > 1e-6)
    throw PreconditionError("candidate_from_parallel_form: lambda not constant over samples");
  c.lambda = 0.5 * (lam_min + lam_max);
  c.degenerate = gamma_amp < 1e-10 || beta_amp < 1e-10;

  c.gamma = normal_contraction_pullback_field(e, sigma, c.metric);
  c.beta = pullback_field(e, sigma, c.metric);
  c.source_embedding = std::make_shared<const Embedding>(e);
  c.source_sigma = std::make_shared<const FormField>(sigma);
  return c;
}

KillingResiduals special_killing_residuals(const KillingCandidate& c,
                                           const std::vector<Point>& samples, Exec exec) {
  const int n = c.metric->dim;
  const int k = c.k;
  const double lam2 = c.lambda * c.lambda;
  KillingResiduals out;
  out.degenerate = c.degenerate;

  const bool beta_trivial = binom(n, k) == 0;  // k = n+1: no tangential part
  const bool gamma_scalar = c.gamma.degree == 0;

  struct PointResult {
    double r1, r2, r3, r4, closed, coclosed;
  };
  std::vector<PointResult> results(samples.size());

  for_each_index(samples.size(), exec, [&](std::size_t idx) {
    const Point& u = samples[idx];
    PointResult pr{0, 0, 0, 0, 0, 0};
    const PointData d = point_data(c, u);
    const int kg = c.gamma.degree;  // k - 1
    const long Cg = binom(n, kg);

    const JetVec nabla_gamma = nabla_form_jets(n, kg, d.gamma_jets, d.christoffel);
    const JetVec dgamma = exterior_derivative_jets(n, kg, d.gamma_jets);  // order 1
    const JetVec nabla_dgamma = nabla_form_jets(n, kg + 1, dgamma, d.christoffel);

    // (i): nabla_m gamma - (1/k) (e_m . d gamma)
    {
      const ComboTable& ct_hi = combo_table(n, kg + 1);
      const ComboTable& ct_lo = combo_table(n, kg);
      std::vector<int> tuple(static_cast<std::size_t>(kg + 1));
      for (int m = 0; m < n; ++m)
        for (int r = 0; r < ct_lo.count(); ++r) {
          const auto& I = ct_lo.combo(r);
          tuple[0] = m;
          for (int t = 0; t < kg; ++t) tuple[static_cast<std::size_t>(t + 1)] = I[static_cast<std::size_t>(t)];
          const auto rs = ct_hi.rank_signed(tuple);
          const double contr =
              rs.sign == 0 ? 0.0 : rs.sign * dgamma[static_cast<std::size_t>(rs.rank)].value();
          pr.r1 = std::max(pr.r1, std::abs(nabla_gamma[static_cast<std::size_t>(m * Cg + r)].value() -
                                           contr / k));
        }
    }

    // (ii): nabla_m (d gamma) + k lambda^2 (e_m^flat ^ gamma)
    {
      const std::vector<double> gv = values_of(d.gamma_jets);
      const long Cd = binom(n, kg + 1);
      for (int m = 0; m < n; ++m) {
        const std::vector<double> xf = coordinate_covector(d.g, n, m);
        const std::vector<double> wedge_val = wedge_components<double>(n, 1, kg, xf, gv);
        for (long r = 0; r < Cd; ++r)
          pr.r2 = std::max(pr.r2,
                           std::abs(nabla_dgamma[static_cast<std::size_t>(m * Cd + r)].value() +
                                    k * lam2 * wedge_val[static_cast<std::size_t>(r)]));
      }
    }

    if (!beta_trivial) {
      const long Cb = binom(n, k);
      const JetVec nabla_beta = nabla_form_jets(n, k, d.beta_jets, d.christoffel);
      const JetVec dstar_beta = codifferential_jets(n, k, nabla_beta, d.ginv);  // order 1
      const JetVec nabla_dstar = nabla_form_jets(n, k - 1, dstar_beta, d.christoffel);

      // (iii): nabla_m beta + 1/(n-k+1) (e_m^flat ^ d* beta)
      {
        const std::vector<double> ds = values_of(dstar_beta);
        for (int m = 0; m < n; ++m) {
          const std::vector<double> xf = coordinate_covector(d.g, n, m);
          const std::vector<double> wedge_val = wedge_components<double>(n, 1, k - 1, xf, ds);
          for (long r = 0; r < Cb; ++r)
            pr.r3 = std::max(pr.r3,
                             std::abs(nabla_beta[static_cast<std::size_t>(m * Cb + r)].value() +
                                      wedge_val[static_cast<std::size_t>(r)] / (n - k + 1)));
        }
      }
      // (iv): nabla_m (d* beta) - (n-k+1) lambda^2 (e_m . beta)
      {
        const std::vector<double> bv = values_of(d.beta_jets);
        const long Cd = binom(n, k - 1);
        std::vector<double> em(static_cast<std::size_t>(n), 0.0);
        for (int m = 0; m < n; ++m) {
          std::fill(em.begin(), em.end(), 0.0);
          em[static_cast<std::size_t>(m)] = 1.0;
          const std::vector<double> contr = interior_components<double>(n, k, em, bv);
          for (long r = 0; r < Cd; ++r)
            pr.r4 = std::max(pr.r4,
                             std::abs(nabla_dstar[static_cast<std::size_t>(m * Cd + r)].value() -
                                      (n - k + 1.0) * lam2 * contr[static_cast<std::size_t>(r)]));
        }
      }
      pr.closed = max_abs_jets(exterior_derivative_jets(n, k, d.beta_jets));
    }

    if (!gamma_scalar)
      pr.coclosed = max_abs_jets(codifferential_jets(n, kg, nabla_gamma, d.ginv));
    results[idx] = pr;
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.grad_gamma.absorb(results[i].r1, samples[i]);
    out.grad_dgamma.absorb(results[i].r2, samples[i]);
    out.grad_beta.absorb(results[i].r3, samples[i]);
    out.grad_dstar_beta.absorb(results[i].r4, samples[i]);
    out.beta_closed.absorb(results[i].closed, samples[i]);
    out.gamma_coclosed.absorb(results[i].coclosed, samples[i]);
  }
  if (beta_trivial) {
    out.grad_beta.note = "trivial: no tangential components at this degree";
    out.grad_dstar_beta.note = out.grad_beta.note;
    out.beta_closed.note = out.grad_beta.note;
  }
  if (gamma_scalar) out.gamma_coclosed.note = "trivial for degree-0 gamma";
  return out;
}

RelationResiduals relation_check(const KillingCandidate& c, const std::vector<Point>& samples,
                                 Exec exec) {
  const int n = c.metric->dim;
  const int k = c.k;
  RelationResiduals out;
  out.degenerate = c.degenerate;
  const bool beta_trivial = binom(n, k) == 0;

  struct PointResult {
    double r1, r2;
  };
  std::vector<PointResult> results(samples.size());
  for_each_index(samples.size(), exec, [&](std::size_t idx) {
    const Point& u = samples[idx];
    PointResult pr{0, 0};
    const PointData d = point_data(c, u);
    const int kg = c.gamma.degree;
    const JetVec dgamma = exterior_derivative_jets(n, kg, d.gamma_jets);
    if (!beta_trivial) {
      for (std::size_t t = 0; t < dgamma.size(); ++t)
        pr.r1 = std::max(pr.r1, std::abs(dgamma[t].value() +
                                         k * c.lambda * d.beta_jets[t].value()));
      const JetVec nabla_beta = nabla_form_jets(n, k, d.beta_jets, d.christoffel);
      const JetVec dstar_beta = codifferential_jets(n, k, nabla_beta, d.ginv);
      for (std::size_t t = 0; t < dstar_beta.size(); ++t)
        pr.r2 = std::max(pr.r2, std::abs(dstar_beta[t].value() +
                                         (n - k + 1.0) * c.lambda *
                                             d.gamma_jets[t].value()));
    } else {
      // beta has no components: the first relation forces d gamma = 0 and
      // the second is vacuous (n-k+1 = 0).
      pr.r1 = max_abs_jets(dgamma);
    }
    results[idx] = pr;
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.dgamma_relation.absorb(results[i].r1, samples[i]);
    out.dstar_beta_relation.absorb(results[i].r2, samples[i]);
  }
  if (beta_trivial) out.dstar_beta_relation.note = "vacuous at top ambient degree";
  return out;
}

NonParallelResult non_parallel_check(const KillingCandidate& c,
                                     const std::vector<Point>& samples) {
  double gamma_amp = 0.0;
  for (const Point& u : samples) gamma_amp = std::max(gamma_amp, max_abs(eval_form(c.gamma, u)));
  if (gamma_amp < 1e-10)
    throw PreconditionError("non_parallel_check: gamma vanishes on the samples (degenerate)");
  NonParallelResult out;
  for (const Point& u : samples) {
    const std::vector<double> nt = nabla_form_tensor(c.gamma, u);
    const double m = max_abs(nt);
    if (m > out.max_gradient) {
      out.max_gradient = m;
      out.witness = u;
    }
  }
  out.non_parallel = out.max_gradient > 1e-6;
  return out;
}

ConeNormalized normalized_for_cone(const KillingCandidate& c) {
  if (c.lambda == 0.0)
    throw PreconditionError("normalized_for_cone: lambda = 0 (totally geodesic, no cone lift)");
  ConeNormalized out;
  out.psi = c.gamma;
  out.lambda = c.lambda > 0 ? 1.0 : -1.0;
  out.metric_scale = c.lambda * c.lambda;
  if (std::abs(out.metric_scale - 1.0) < 1e-12) {
    out.scaled_metric = c.metric;
    out.metric_scale = 1.0;
    return out;
  }
  auto scaled = std::make_shared<MetricField>(*c.metric);
  scaled->label = c.metric->label + " scaled";
  const FieldFn inner = c.metric->components;
  const double scale = out.metric_scale;
  scaled->components = [inner, scale](std::span<const Jet> x) {
    JetVec g = inner(x);
    for (Jet& e : g) e = e * scale;
    return g;
  };
  out.scaled_metric = MetricPtr(scaled);
  out.psi.metric = out.scaled_metric;
  return out;
}

FormField cone_lift(const FormField& psi, int k, MetricPtr cone_metric, double lambda) {
  if (psi.degree != k - 1)
    throw DomainError("cone_lift: form degree must be k-1");
  const int n = psi.dim;
  if (cone_metric->dim != n + 1) throw DomainError("cone_lift: cone metric dimension mismatch");

  // A lambda = +1 candidate was built with the opposite normal; flipping
  // gamma realizes the lambda = -1 normalization the lift formula assumes.
  const double flip = lambda > 0 ? -1.0 : 1.0;

  FormField lifted;
  lifted.dim = n + 1;
  lifted.degree = k;
  lifted.metric = std::move(cone_metric);
  lifted.jet_order_overhead = psi.jet_order_overhead + 1;  // uses d psi
  lifted.label = "cone_lift(" + psi.label + ")";
  const FormField base = psi;
  const FormField dpsi = exterior_derivative(psi);
  lifted.components = [n, k, base, dpsi, flip](std::span<const Jet> coords) {
    // coords: (u^1..u^n, t); base fields see the first n jets.
    const Jet& t = coords[static_cast<std::size_t>(n)];
    const std::span<const Jet> ujets = coords.subspan(0, static_cast<std::size_t>(n));
    const JetVec psi_v = base.components(ujets);
    const JetVec dpsi_v = dpsi.components(ujets);
    const Jet tk1 = pow(t, k - 1);
    const Jet tk = tk1 * t;

    const ComboTable& ct_out = combo_table(n + 1, k);
    const ComboTable& ct_base_k = combo_table(n, k);
    const ComboTable& ct_base_k1 = combo_table(n, k - 1);
    JetVec out;
    out.reserve(static_cast<std::size_t>(ct_out.count()));
    const double dt_sign = (k - 1) % 2 == 0 ? 1.0 : -1.0;  // dt^psi vs psi^dt
    for (int r = 0; r < ct_out.count(); ++r) {
      const auto& I = ct_out.combo(r);
      const bool has_t = I[static_cast<std::size_t>(k - 1)] == n;
      if (has_t) {
        // (t^{k-1} dt ^ psi) on (I', t) = (-1)^{k-1} t^{k-1} psi_{I'}
        std::vector<int> rest(I.begin(), I.end() - 1);
        const Jet comp = (k - 1 == 0)
                             ? psi_v[0]
                             : psi_v[static_cast<std::size_t>(ct_base_k1.rank(rest))];
        out.push_back(comp * tk1 * (dt_sign * flip));
      } else {
        // (1/k) t^k (d psi)_I
        out.push_back(dpsi_v[static_cast<std::size_t>(ct_base_k.rank(I))] * tk *
                      (flip / static_cast<double>(k)));
      }
    }
    return out;
  };
  return lifted;
}

ResidualSummary cone_lift_parallel_residual(const FormField& lifted,
                                            const std::vector<Point>& cone_samples,
                                            Exec exec) {
  return sweep_residual(cone_samples, exec, [&](const Point& u) {
    const std::vector<double> nt = nabla_form_tensor(lifted, u);
    return max_abs(nt);
  });
}

}  // namespace umb
