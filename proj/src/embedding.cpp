#include "umb/embedding.hpp"

#include <cmath>

namespace umb {

namespace {

JetVec compose_all(const JetVec& ambient_jets, std::span<const Jet> xjets) {
  JetVec out;
  out.reserve(ambient_jets.size());
  for (const Jet& a : ambient_jets) out.push_back(compose(a, xjets));
  return out;
}

JetMat compose_mat(const JetMat& m, std::span<const Jet> xjets) {
  JetMat out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.e.reserve(m.e.size());
  for (const Jet& a : m.e) out.e.push_back(compose(a, xjets));
  return out;
}

}  // namespace

HyperFrame hyper_frame(const Embedding& e, const Point& u, int order) {
  const int n = e.intrinsic_dim;
  const int na = n + 1;
  if (!e.domain.lo.empty() && !e.domain.contains(u))
    throw DomainError("point outside hypersurface chart domain", u);

  HyperFrame fr;
  fr.n = n;
  const JetVec lifted = lift_point(u, order + e.map_order_overhead);
  fr.x = e.map(lifted);
  if (static_cast<int>(fr.x.size()) != na)
    throw DomainError("embedding map returned wrong dimension");

  // Jacobian rows: D_a x^alpha.
  fr.tangents = JetMat(n, na, fr.x[0].derive(0));
  for (int a = 0; a < n; ++a)
    for (int al = 0; al < na; ++al) fr.tangents.at(a, al) = fr.x[static_cast<std::size_t>(al)].derive(a);

  // Ambient metric and connection, evaluated at the ambient point and
  // composed with the map jets.
  Point x0(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = fr.x[static_cast<std::size_t>(al)].value();
  const JetVec ambient_lift = lift_point(x0, order + e.ambient->jet_order_overhead);
  JetMat gbar_amb;
  try {
    gbar_amb = metric_jets(*e.ambient, ambient_lift);
  } catch (const DomainError& err) {
    throw DomainError(err.what(), u);
  }
  const JetMat gbar_inv_amb = jet_mat_inverse(gbar_amb);
  const JetVec gammabar_amb = christoffel_jets(gbar_amb, gbar_inv_amb);

  fr.ambient_g = compose_mat(gbar_amb, fr.x);
  fr.ambient_ginv = compose_mat(gbar_inv_amb, fr.x);
  fr.ambient_gamma = compose_all(gammabar_amb, fr.x);

  // Covector annihilating the tangent space, by cofactor expansion of the
  // Jacobian; smooth and nonzero exactly where the immersion has full rank.
  JetVec w(static_cast<std::size_t>(na), fr.x[0] * 0.0);
  {
    JetMat minor(n, n, fr.tangents.at(0, 0));
    for (int al = 0; al < na; ++al) {
      for (int a = 0; a < n; ++a) {
        int t = 0;
        for (int b = 0; b < na; ++b) {
          if (b == al) continue;
          minor.at(a, t++) = fr.tangents.at(a, b);
        }
      }
      const Jet d = jet_mat_det(minor);
      w[static_cast<std::size_t>(al)] = (al % 2 == 0) ? d : -d;
    }
  }
  // Raise with the ambient metric and normalize.
  JetVec nup(static_cast<std::size_t>(na), fr.x[0] * 0.0);
  for (int al = 0; al < na; ++al) {
    Jet s = w[0] * 0.0;
    for (int be = 0; be < na; ++be) s = s + fr.ambient_ginv.at(al, be) * w[static_cast<std::size_t>(be)];
    nup[static_cast<std::size_t>(al)] = s;
  }
  Jet norm2 = w[0] * 0.0;
  for (int al = 0; al < na; ++al) norm2 = norm2 + w[static_cast<std::size_t>(al)] * nup[static_cast<std::size_t>(al)];
  if (norm2.value() <= 1e-20)
    throw DomainError("rank-deficient differential (degenerate parametrization)", u);
  const Jet inv_norm = 1.0 / sqrt(norm2);
  fr.normal.reserve(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al)
    fr.normal.push_back(nup[static_cast<std::size_t>(al)] * inv_norm * static_cast<double>(e.orientation));

  // Induced metric g_ab = gbar(T_a, T_b).
  fr.induced_g = JetMat(n, n, fr.x[0] * 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Jet s = fr.x[0] * 0.0;
      for (int al = 0; al < na; ++al)
        for (int be = 0; be < na; ++be)
          s = s + fr.ambient_g.at(al, be) * fr.tangents.at(a, al) * fr.tangents.at(b, be);
      fr.induced_g.at(a, b) = s;
      fr.induced_g.at(b, a) = s;
    }
  fr.induced_ginv = jet_mat_inverse(fr.induced_g);

  if (order >= 2) {
    // II_ab = gbar(D_a T_b + Gammabar(T_a, T_b), N).
    fr.second_fundamental.assign(static_cast<std::size_t>(n * n), fr.x[0] * 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        JetVec acc(static_cast<std::size_t>(na), fr.x[0] * 0.0);
        for (int ga = 0; ga < na; ++ga) {
          Jet s = fr.tangents.at(a, ga).derive(b);
          for (int al = 0; al < na; ++al)
            for (int be = 0; be < na; ++be)
              s = s + fr.ambient_gamma[static_cast<std::size_t>((ga * na + al) * na + be)] *
                          fr.tangents.at(a, al) * fr.tangents.at(b, be);
          acc[static_cast<std::size_t>(ga)] = s;
        }
        Jet ii = fr.x[0] * 0.0;
        for (int ga = 0; ga < na; ++ga)
          for (int de = 0; de < na; ++de)
            ii = ii + fr.ambient_g.at(ga, de) * acc[static_cast<std::size_t>(ga)] *
                          fr.normal[static_cast<std::size_t>(de)];
        fr.second_fundamental[static_cast<std::size_t>(a * n + b)] = ii;
        fr.second_fundamental[static_cast<std::size_t>(b * n + a)] = ii;
      }
    Jet tr = fr.x[0] * 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        tr = tr + fr.induced_ginv.at(a, b) * fr.second_fundamental[static_cast<std::size_t>(a * n + b)];
    fr.lambda = tr / static_cast<double>(n);
  } else {
    fr.lambda = fr.x[0] * 0.0;
  }
  return fr;
}

Eigen::MatrixXd first_fundamental_form(const Embedding& e, const Point& u) {
  const HyperFrame fr = hyper_frame(e, u, 1);
  const int n = fr.n;
  Eigen::MatrixXd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = fr.induced_g.at(a, b).value();
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw DomainError("induced metric not positive definite", u);
  return g;
}

HypersurfacePointData second_fundamental_form(const Embedding& e, const Point& u) {
  const HyperFrame fr = hyper_frame(e, u, 2);
  const int n = fr.n;
  const int na = n + 1;
  HypersurfacePointData d;
  d.induced_metric.resize(n, n);
  d.second_fundamental.resize(n, n);
  d.normal.resize(na);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      d.induced_metric(a, b) = fr.induced_g.at(a, b).value();
      d.second_fundamental(a, b) = fr.second_fundamental[static_cast<std::size_t>(a * n + b)].value();
    }
  for (int al = 0; al < na; ++al) d.normal(al) = fr.normal[static_cast<std::size_t>(al)].value();
  d.lambda_estimate = fr.lambda.value();
  d.mean_curvature = d.lambda_estimate;

  // Dual route: II'_ab = -gbar(nablabar_{T_a} N, T_b); agreement is the
  // shape-operator duality.
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int ga = 0; ga < na; ++ga) {
        double dn = fr.normal[static_cast<std::size_t>(ga)].derive(a).value();
        for (int al = 0; al < na; ++al)
          for (int be = 0; be < na; ++be)
            dn += fr.ambient_gamma[static_cast<std::size_t>((ga * na + al) * na + be)].value() *
                  fr.tangents.at(a, al).value() * fr.normal[static_cast<std::size_t>(be)].value();
        for (int de = 0; de < na; ++de)
          s += fr.ambient_g.at(ga, de).value() * dn * fr.tangents.at(b, de).value();
      }
      worst = std::max(worst, std::abs(-s - d.second_fundamental(a, b)));
    }
  d.shape_duality_residual = worst;
  return d;
}

double umbilicity_residual(const Embedding& e, const Point& u) {
  const HyperFrame fr = hyper_frame(e, u, 2);
  const int n = fr.n;
  Eigen::MatrixXd t(n, n), ginv(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      t(a, b) = fr.second_fundamental[static_cast<std::size_t>(a * n + b)].value() -
                fr.lambda.value() * fr.induced_g.at(a, b).value();
      ginv(a, b) = fr.induced_ginv.at(a, b).value();
    }
  const Eigen::MatrixXd m = ginv * t;
  return std::sqrt(std::max(0.0, (m * m).trace()));
}

namespace {

// Transform an ambient curvature tensor onto hypersurface arguments:
// values Rbar_{al be ga de} contracted with columns of args (each an ambient
// vector).
double contract4(const std::vector<double>& R, int na, const Eigen::VectorXd& A,
                 const Eigen::VectorXd& B, const Eigen::VectorXd& C,
                 const Eigen::VectorXd& D) {
  double s = 0.0;
  for (int i = 0; i < na; ++i) {
    if (A(i) == 0.0) continue;
    for (int j = 0; j < na; ++j) {
      if (B(j) == 0.0) continue;
      for (int k = 0; k < na; ++k) {
        if (C(k) == 0.0) continue;
        double inner = 0.0;
        for (int l = 0; l < na; ++l)
          inner += R[static_cast<std::size_t>(((i * na + j) * na + k) * na + l)] * D(l);
        s += A(i) * B(j) * C(k) * inner;
      }
    }
  }
  return s;
}

}  // namespace

ResidualSummary gauss_residual(const Embedding& e, const Point& u) {
  const double umb = umbilicity_residual(e, u);
  if (umb > kUmbilicGate)
    throw PreconditionError("gauss_residual: point is not umbilical (residual " +
                            std::to_string(umb) + ")");
  const HyperFrame fr = hyper_frame(e, u, 2);
  const int n = fr.n;
  const int na = n + 1;
  const double lam2 = fr.lambda.value() * fr.lambda.value();

  Point x0(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = fr.x[static_cast<std::size_t>(al)].value();
  const CurvatureAtPoint amb = curvature(*e.ambient, x0);

  const MetricPtr induced = induced_metric_field(e);
  const CurvatureAtPoint intr = curvature(*induced, u);

  std::vector<Eigen::VectorXd> T(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v(na);
    for (int al = 0; al < na; ++al) v(al) = fr.tangents.at(a, al).value();
    T[static_cast<std::size_t>(a)] = v;
  }
  auto gval = [&](int a, int b) { return fr.induced_g.at(a, b).value(); };

  ResidualSummary s;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double rbar = contract4(amb.riemann, na, T[static_cast<std::size_t>(a)],
                                        T[static_cast<std::size_t>(b)], T[static_cast<std::size_t>(c)],
                                        T[static_cast<std::size_t>(d)]);
          const double plane = gval(a, c) * gval(b, d) - gval(a, d) * gval(b, c);
          const double r = std::abs(rbar - intr.rm(a, b, c, d) - lam2 * plane);
          s.absorb(r, u);
        }
  return s;
}

CodazziResult codazzi_residual(const Embedding& e, const Point& u) {
  const double umb = umbilicity_residual(e, u);
  if (umb > kUmbilicGate)
    throw PreconditionError("codazzi_residual: point is not umbilical (residual " +
                            std::to_string(umb) + ")");
  const HyperFrame fr = hyper_frame(e, u, 3);
  const int n = fr.n;
  const int na = n + 1;

  Point x0(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = fr.x[static_cast<std::size_t>(al)].value();
  const CurvatureAtPoint amb = curvature(*e.ambient, x0);

  std::vector<Eigen::VectorXd> T(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v(na);
    for (int al = 0; al < na; ++al) v(al) = fr.tangents.at(a, al).value();
    T[static_cast<std::size_t>(a)] = v;
  }
  Eigen::VectorXd N(na);
  for (int al = 0; al < na; ++al) N(al) = fr.normal[static_cast<std::size_t>(al)].value();

  // dlambda over the chart from the lambda jet.
  std::vector<double> dl(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) dl[static_cast<std::size_t>(a)] = fr.lambda.d1(a);

  CodazziResult out;
  auto gval = [&](int a, int b) { return fr.induced_g.at(a, b).value(); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double rbar = contract4(amb.riemann, na, T[static_cast<std::size_t>(a)],
                                      T[static_cast<std::size_t>(b)], T[static_cast<std::size_t>(c)], N);
        const double rhs = dl[static_cast<std::size_t>(a)] * gval(b, c) -
                           dl[static_cast<std::size_t>(b)] * gval(a, c);
        out.full.absorb(std::abs(rbar - rhs), u);
      }

  // Traced form: Ricbar(T_a, N) = (n-1) dlambda(T_a).
  for (int a = 0; a < n; ++a) {
    double ric = 0.0;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        ric += amb.ricci[static_cast<std::size_t>(i * na + j)] * T[static_cast<std::size_t>(a)](i) * N(j);
    out.traced.absorb(std::abs(ric - (n - 1) * dl[static_cast<std::size_t>(a)]), u);
  }
  return out;
}

EinsteinLambdaResult einstein_lambda_check(const Embedding& e,
                                           const std::vector<Point>& samples) {
  if (!e.ambient->einstein)
    throw PreconditionError("einstein_lambda_check: ambient metric not flagged Einstein");
  const int n = e.intrinsic_dim;
  if (n < 2) throw PreconditionError("einstein_lambda_check: needs intrinsic dimension >= 2");

  const MetricPtr induced = induced_metric_field(e);
  EinsteinLambdaResult out;
  double lam_min = 0.0, lam_max = 0.0, scal_min = 0.0, scal_max = 0.0;
  bool first = true;
  double lam_sum = 0.0;
  for (const Point& u : samples) {
    const double umb = umbilicity_residual(e, u);
    if (umb > kUmbilicGate)
      throw PreconditionError("einstein_lambda_check: non-umbilical sample point");
    const HyperFrame fr = hyper_frame(e, u, 2);
    Point x0(static_cast<std::size_t>(n + 1));
    for (int al = 0; al <= n; ++al) x0[static_cast<std::size_t>(al)] = fr.x[static_cast<std::size_t>(al)].value();
    const double scal_g = curvature(*induced, u).scalar;
    const double scal_bar = curvature(*e.ambient, x0).scalar;
    const double lam = fr.lambda.value();
    const double resid = std::abs(lam * lam - scal_g / (n * (n - 1.0)) +
                                  scal_bar / (n * (n + 1.0)));
    out.formula.absorb(resid, u);
    if ((n + 1.0) * scal_g < (n - 1.0) * scal_bar - 1e-7) out.inequality_holds = false;
    if (first) {
      lam_min = lam_max = lam;
      scal_min = scal_max = scal_g;
      first = false;
    } else {
      lam_min = std::min(lam_min, lam);
      lam_max = std::max(lam_max, lam);
      scal_min = std::min(scal_min, scal_g);
      scal_max = std::max(scal_max, scal_g);
    }
    lam_sum += lam;
  }
  out.lambda_spread = lam_max - lam_min;
  out.scalar_spread = scal_max - scal_min;
  out.lambda_mean = samples.empty() ? 0.0 : lam_sum / static_cast<double>(samples.size());
  return out;
}

JetVec pullback_components(int n, int k, const JetVec& sigma_at_x, const JetMat& tangents) {
  const int na = n + 1;
  const ComboTable& ct_amb = combo_table(na, k);
  const ComboTable& ct_in = combo_table(n, k);
  JetVec out;
  out.reserve(static_cast<std::size_t>(ct_in.count()));
  for (int r = 0; r < ct_in.count(); ++r) {
    const auto& I = ct_in.combo(r);
    Jet s = tangents.at(0, 0) * 0.0;
    if (k == 0) {
      out.push_back(sigma_at_x[0]);
      continue;
    }
    JetMat minor(k, k, s);
    for (int c = 0; c < ct_amb.count(); ++c) {
      const auto& J = ct_amb.combo(c);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor.at(i, j) = tangents.at(I[static_cast<std::size_t>(i)], J[static_cast<std::size_t>(j)]);
      s = s + sigma_at_x[static_cast<std::size_t>(c)] * jet_mat_det(minor);
    }
    out.push_back(std::move(s));
  }
  return out;
}

PullbackPair pullback_forms(const Embedding& e, const FormField& sigma, const Point& u) {
  const int n = e.intrinsic_dim;
  const int na = n + 1;
  const int k = sigma.degree;
  if (k < 1 || k > na) throw DomainError("pullback_forms: degree out of range");
  const HyperFrame fr = hyper_frame(e, u, 1);

  Point x0(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = fr.x[static_cast<std::size_t>(al)].value();
  const JetVec sig_amb = eval_form_jets(sigma, lift_point(x0, 1 + sigma.jet_order_overhead));
  JetVec sig;
  sig.reserve(sig_amb.size());
  for (const Jet& s : sig_amb) sig.push_back(compose(s, fr.x));
  const JetVec ncontr = interior_components<Jet>(na, k, fr.normal, sig);
  PullbackPair out;
  {
    const JetVec b = pullback_components(n, k, sig, fr.tangents);
    const JetVec gmm = pullback_components(n, k - 1, ncontr, fr.tangents);
    out.beta.resize(b.size());
    out.gamma.resize(gmm.size());
    for (std::size_t t = 0; t < b.size(); ++t) out.beta[t] = b[t].value();
    for (std::size_t t = 0; t < gmm.size(); ++t) out.gamma[t] = gmm[t].value();
  }
  double gmax = 0.0;
  for (double v : out.gamma) gmax = std::max(gmax, std::abs(v));
  out.gamma_vanishes = gmax < 1e-10;

  // Decomposition check sigma = N ^ gamma + beta on the adapted frame
  // {T_1..T_n, N}: tuples with one N slot must reproduce gamma, tuples with
  // none must reproduce beta, independently of the pullback route above.
  const ComboTable& ct = combo_table(na, k);
  std::vector<Eigen::VectorXd> frame;
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v(na);
    for (int al = 0; al < na; ++al) v(al) = fr.tangents.at(a, al).value();
    frame.push_back(v);
  }
  {
    Eigen::VectorXd v(na);
    for (int al = 0; al < na; ++al) v(al) = fr.normal[static_cast<std::size_t>(al)].value();
    frame.push_back(v);
  }
  FormValue sigval(sig.size());
  for (std::size_t t = 0; t < sig.size(); ++t) sigval[t] = sig[t].value();

  const ComboTable& ct_in_k = combo_table(n, k);
  const ComboTable& ct_in_km1 = combo_table(n, k - 1);
  double worst = 0.0;
  for (int r = 0; r < ct.count(); ++r) {
    const auto& I = ct.combo(r);  // indices into the adapted frame, n = N slot
    // sigma evaluated on the frame tuple
    double lhs = 0.0;
    {
      // contract sigma with frame vectors one slot at a time
      std::vector<double> cur = sigval;
      int deg = k;
      for (int t = 0; t < k; ++t) {
        const Eigen::VectorXd& v = frame[static_cast<std::size_t>(I[static_cast<std::size_t>(t)])];
        std::vector<double> vv(static_cast<std::size_t>(na));
        for (int al = 0; al < na; ++al) vv[static_cast<std::size_t>(al)] = v(al);
        cur = interior_components<double>(na, deg, vv, cur);
        --deg;
      }
      lhs = cur[0];
    }
    double rhs = 0.0;
    const bool has_normal = I[static_cast<std::size_t>(k - 1)] == n;
    if (has_normal) {
      // (N ^ gamma)(T_{i1},...,T_{ik-1}, N) = (-1)^{k-1} gamma(T_{i1},...)
      std::vector<int> rest(I.begin(), I.end() - 1);
      if (k - 1 == 0)
        rhs = ((k - 1) % 2 == 0 ? 1.0 : -1.0) * out.gamma[0];
      else
        rhs = ((k - 1) % 2 == 0 ? 1.0 : -1.0) *
              out.gamma[static_cast<std::size_t>(ct_in_km1.rank(rest))];
    } else {
      rhs = out.beta[static_cast<std::size_t>(ct_in_k.rank(I))];
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  out.decomposition_residual = worst;
  return out;
}

FormField pullback_field(const Embedding& e, const FormField& sigma, MetricPtr induced) {
  FormField f;
  f.dim = e.intrinsic_dim;
  f.degree = sigma.degree;
  f.metric = std::move(induced);
  f.jet_order_overhead = 1 + std::max(e.map_order_overhead, sigma.jet_order_overhead);
  f.label = "i*(" + sigma.label + ")";
  const int n = e.intrinsic_dim;
  const int k = sigma.degree;
  const Embedding emb = e;
  const FormField sig = sigma;
  f.components = [n, k, emb, sig](std::span<const Jet> ujets) {
    const JetVec x = emb.map(ujets);
    const int na = n + 1;
    JetMat tangents(n, na, x[0].derive(0));
    for (int a = 0; a < n; ++a)
      for (int al = 0; al < na; ++al) tangents.at(a, al) = x[static_cast<std::size_t>(al)].derive(a);
    Point x0(static_cast<std::size_t>(na));
    for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = x[static_cast<std::size_t>(al)].value();
    const int lift_order =
        (ujets.empty() ? 0 : ujets[0].order()) + sig.jet_order_overhead;
    const JetVec sig_amb = eval_form_jets(sig, lift_point(x0, lift_order));
    JetVec sig_at_x;
    sig_at_x.reserve(sig_amb.size());
    for (const Jet& s : sig_amb) sig_at_x.push_back(compose(s, x));
    return pullback_components(n, k, sig_at_x, tangents);
  };
  return f;
}

MapWithNormal map_with_normal(const Embedding& e, std::span<const Jet> ujets) {
  const int n = e.intrinsic_dim;
  const int na = n + 1;
  MapWithNormal out;
  out.x = e.map(ujets);
  out.tangents = JetMat(n, na, out.x[0].derive(0));
  for (int a = 0; a < n; ++a)
    for (int al = 0; al < na; ++al)
      out.tangents.at(a, al) = out.x[static_cast<std::size_t>(al)].derive(a);

  // The normal tops out one order below the map (the tangents already spent
  // a derivative), so the ambient metric only needs that much.
  const int normal_order = std::max(0, out.x[0].order() - 1);
  JetVec x_lo;
  x_lo.reserve(out.x.size());
  for (const Jet& xj : out.x) x_lo.push_back(xj.truncated(normal_order));

  Point x0(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = out.x[static_cast<std::size_t>(al)].value();
  const JetVec ambient_lift =
      lift_point(x0, normal_order + e.ambient->jet_order_overhead);
  const JetMat gbar_amb = metric_jets(*e.ambient, ambient_lift);
  const JetMat gbar_inv_amb = jet_mat_inverse(gbar_amb);
  JetMat ambient_ginv;
  ambient_ginv.rows = ambient_ginv.cols = na;
  ambient_ginv.e.reserve(gbar_inv_amb.e.size());
  for (const Jet& a : gbar_inv_amb.e) ambient_ginv.e.push_back(compose(a, x_lo));

  JetVec w(static_cast<std::size_t>(na), out.x[0] * 0.0);
  JetMat minor(n, n, out.tangents.at(0, 0));
  for (int al = 0; al < na; ++al) {
    for (int a = 0; a < n; ++a) {
      int t = 0;
      for (int b = 0; b < na; ++b) {
        if (b == al) continue;
        minor.at(a, t++) = out.tangents.at(a, b);
      }
    }
    const Jet d = jet_mat_det(minor);
    w[static_cast<std::size_t>(al)] = (al % 2 == 0) ? d : -d;
  }
  JetVec nup(static_cast<std::size_t>(na), out.x[0] * 0.0);
  for (int al = 0; al < na; ++al) {
    Jet s = w[0] * 0.0;
    for (int be = 0; be < na; ++be) s = s + ambient_ginv.at(al, be) * w[static_cast<std::size_t>(be)];
    nup[static_cast<std::size_t>(al)] = s;
  }
  Jet norm2 = w[0] * 0.0;
  for (int al = 0; al < na; ++al)
    norm2 = norm2 + w[static_cast<std::size_t>(al)] * nup[static_cast<std::size_t>(al)];
  if (norm2.value() <= 1e-20) throw DomainError("rank-deficient differential");
  const Jet inv_norm = 1.0 / sqrt(norm2);
  out.normal.reserve(static_cast<std::size_t>(na));
  for (int al = 0; al < na; ++al)
    out.normal.push_back(nup[static_cast<std::size_t>(al)] * inv_norm *
                         static_cast<double>(e.orientation));
  return out;
}

FormField normal_contraction_pullback_field(const Embedding& e, const FormField& sigma,
                                            MetricPtr induced) {
  FormField f;
  f.dim = e.intrinsic_dim;
  f.degree = sigma.degree - 1;
  f.metric = std::move(induced);
  f.jet_order_overhead = 1 + std::max(e.map_order_overhead, sigma.jet_order_overhead);
  f.label = "i*(N . " + sigma.label + ")";
  const int n = e.intrinsic_dim;
  const int k = sigma.degree;
  const Embedding emb = e;
  const FormField sig = sigma;
  f.components = [n, k, emb, sig](std::span<const Jet> ujets) {
    const int na = n + 1;
    const MapWithNormal mw = map_with_normal(emb, ujets);
    Point x0(static_cast<std::size_t>(na));
    for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = mw.x[static_cast<std::size_t>(al)].value();
    const int lift_order = ujets.empty() ? 0 : ujets[0].order();
    const JetVec sig_amb =
        eval_form_jets(sig, lift_point(x0, lift_order + sig.jet_order_overhead));
    JetVec sig_at_x;
    sig_at_x.reserve(sig_amb.size());
    for (const Jet& s : sig_amb) sig_at_x.push_back(compose(s, mw.x));
    const JetVec contracted = interior_components<Jet>(na, k, mw.normal, sig_at_x);
    return pullback_components(n, k - 1, contracted, mw.tangents);
  };
  return f;
}

MetricPtr induced_metric_field(const Embedding& e) {
  auto m = std::make_shared<MetricField>();
  m->dim = e.intrinsic_dim;
  m->label = "induced(" + e.label + ")";
  m->domain = e.domain;
  m->orientation = 1;
  m->jet_order_overhead = 1 + std::max(e.map_order_overhead, e.ambient->jet_order_overhead);
  const Embedding emb = e;
  m->components = [emb](std::span<const Jet> ujets) {
    const int n = emb.intrinsic_dim;
    const int na = n + 1;
    const JetVec x = emb.map(ujets);
    JetMat tangents(n, na, x[0].derive(0));
    for (int a = 0; a < n; ++a)
      for (int al = 0; al < na; ++al) tangents.at(a, al) = x[static_cast<std::size_t>(al)].derive(a);
    Point x0(static_cast<std::size_t>(na));
    for (int al = 0; al < na; ++al) x0[static_cast<std::size_t>(al)] = x[static_cast<std::size_t>(al)].value();
    const int lift_order = ujets.empty() ? 0 : ujets[0].order();
    const JetVec ambient_lift = lift_point(x0, lift_order + emb.ambient->jet_order_overhead);
    const JetMat gbar_amb = metric_jets(*emb.ambient, ambient_lift);
    JetMat gbar(na, na, x[0] * 0.0);
    for (int al = 0; al < na; ++al)
      for (int be = 0; be < na; ++be) gbar.at(al, be) = compose(gbar_amb.at(al, be), x);
    JetVec out;
    out.reserve(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Jet s = x[0] * 0.0;
        for (int al = 0; al < na; ++al)
          for (int be = 0; be < na; ++be)
            s = s + gbar.at(al, be) * tangents.at(a, al) * tangents.at(b, be);
        out.push_back(std::move(s));
      }
    return out;
  };
  return m;
}

FrameEquationResult frame_equation_residual(const Embedding& e, const Point& u) {
  const HyperFrame fr = hyper_frame(e, u, 3);
  const int n = fr.n;
  const int na = n + 1;
  const double lam = fr.lambda.value();

  // Intrinsic connection of the induced metric.
  const JetVec gamma_in = christoffel_jets(fr.induced_g, fr.induced_ginv);

  FrameEquationResult out;
  // Tangential equation: D_a T_b + Gammabar(T_a,T_b) - Gamma^c_ab T_c -
  // lambda g_ab N = 0 (componentwise in the ambient chart).
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int ga = 0; ga < na; ++ga) {
        double s = fr.tangents.at(a, ga).derive(b).value();
        for (int al = 0; al < na; ++al)
          for (int be = 0; be < na; ++be)
            s += fr.ambient_gamma[static_cast<std::size_t>((ga * na + al) * na + be)].value() *
                 fr.tangents.at(a, al).value() * fr.tangents.at(b, be).value();
        for (int c = 0; c < n; ++c)
          s -= gamma_in[static_cast<std::size_t>((c * n + a) * n + b)].value() *
               fr.tangents.at(c, ga).value();
        s -= lam * fr.induced_g.at(a, b).value() * fr.normal[static_cast<std::size_t>(ga)].value();
        out.tangent_residual = std::max(out.tangent_residual, std::abs(s));
      }

  // Normal equation: D_a N + Gammabar(T_a, N) + lambda T_a = 0.
  for (int a = 0; a < n; ++a)
    for (int ga = 0; ga < na; ++ga) {
      double s = fr.normal[static_cast<std::size_t>(ga)].derive(a).value();
      for (int al = 0; al < na; ++al)
        for (int be = 0; be < na; ++be)
          s += fr.ambient_gamma[static_cast<std::size_t>((ga * na + al) * na + be)].value() *
               fr.tangents.at(a, al).value() * fr.normal[static_cast<std::size_t>(be)].value();
      s += lam * fr.tangents.at(a, ga).value();
      out.normal_residual = std::max(out.normal_residual, std::abs(s));
    }
  return out;
}

}  // namespace umb
