#include "umb/forms.hpp"

#include <cmath>

namespace umb {

namespace {

Jet jet_zero_like(const Jet& proto) { return Jet::constant_like(proto, 0.0); }

int max_overhead(const FormField& f) {
  int o = f.jet_order_overhead;
  if (f.metric) o = std::max(o, f.metric->jet_order_overhead);
  return o;
}

}  // namespace

JetVec nabla_form_jets(int n, int k, const JetVec& sigma, const JetVec& gamma) {
  const ComboTable& ct = combo_table(n, k);
  const int C = ct.count();
  const Jet zero = jet_zero_like(sigma.empty() ? gamma[0] : sigma[0]).truncated(
      std::max(0, (sigma.empty() ? gamma[0].order() : sigma[0].order()) - 1));
  JetVec out(static_cast<std::size_t>(n * C), zero);
  std::vector<int> tuple(static_cast<std::size_t>(k));
  for (int m = 0; m < n; ++m)
    for (int r = 0; r < C; ++r) {
      const auto& I = ct.combo(r);
      Jet s = sigma[static_cast<std::size_t>(r)].derive(m);
      for (int j = 0; j < k; ++j) {
        for (int t = 0; t < k; ++t) tuple[static_cast<std::size_t>(t)] = I[static_cast<std::size_t>(t)];
        for (int p = 0; p < n; ++p) {
          const Jet& G = gamma[static_cast<std::size_t>((p * n + m) * n + I[static_cast<std::size_t>(j)])];
          tuple[static_cast<std::size_t>(j)] = p;
          const auto rs = ct.rank_signed(tuple);
          if (rs.sign != 0)
            s = s - G * (rs.sign > 0 ? sigma[static_cast<std::size_t>(rs.rank)]
                                     : -sigma[static_cast<std::size_t>(rs.rank)]);
        }
        tuple[static_cast<std::size_t>(j)] = I[static_cast<std::size_t>(j)];
      }
      out[static_cast<std::size_t>(m * C + r)] = s;
    }
  return out;
}

JetVec exterior_derivative_jets(int n, int k, const JetVec& sigma) {
  const ComboTable& ct_out = combo_table(n, k + 1);
  const ComboTable& ct_in = combo_table(n, k);
  JetVec out;
  out.reserve(static_cast<std::size_t>(ct_out.count()));
  std::vector<int> sub(static_cast<std::size_t>(k));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& K = ct_out.combo(r);
    Jet s = sigma[0].derive(0) * 0.0;
    for (int j = 0; j <= k; ++j) {
      int t = 0;
      for (int q = 0; q <= k; ++q)
        if (q != j) sub[static_cast<std::size_t>(t++)] = K[static_cast<std::size_t>(q)];
      const Jet d = sigma[static_cast<std::size_t>(ct_in.rank(sub))].derive(
          K[static_cast<std::size_t>(j)]);
      s = (j % 2 == 0) ? s + d : s - d;
    }
    out.push_back(std::move(s));
  }
  return out;
}

template <class T>
std::vector<T> wedge_components(int n, int p, int q, std::span<const T> a,
                                std::span<const T> b) {
  const ComboTable& ct_out = combo_table(n, p + q);
  const ComboTable& ct_a = combo_table(n, p);
  const ComboTable& ct_b = combo_table(n, q);
  const ComboTable& splits = combo_table(p + q, p);  // positions of a-indices
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(ct_out.count()));
  std::vector<int> ia(static_cast<std::size_t>(p)), ib(static_cast<std::size_t>(q));
  std::vector<int> pos_b(static_cast<std::size_t>(q));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& I = ct_out.combo(r);
    T s = [&] {
      if constexpr (std::is_same_v<T, Jet>)
        return Jet::constant_like(a.empty() ? b[0] : a[0], 0.0);
      else
        return 0.0;
    }();
    for (int w = 0; w < splits.count(); ++w) {
      const auto& P = splits.combo(w);
      int bi = 0;
      {
        int pi = 0;
        for (int t = 0; t < p + q; ++t) {
          if (pi < p && P[static_cast<std::size_t>(pi)] == t) {
            ia[static_cast<std::size_t>(pi)] = I[static_cast<std::size_t>(t)];
            ++pi;
          } else {
            ib[static_cast<std::size_t>(bi)] = I[static_cast<std::size_t>(t)];
            pos_b[static_cast<std::size_t>(bi)] = t;
            ++bi;
          }
        }
      }
      const int sign = split_sign(std::span<const int>(P.data(), P.size()),
                                  std::span<const int>(pos_b.data(), pos_b.size()));
      const T term = a[static_cast<std::size_t>(ct_a.rank(ia))] *
                     b[static_cast<std::size_t>(ct_b.rank(ib))];
      s = (sign > 0) ? s + term : s - term;
    }
    out.push_back(std::move(s));
  }
  return out;
}

template std::vector<double> wedge_components<double>(int, int, int, std::span<const double>,
                                                      std::span<const double>);
template std::vector<Jet> wedge_components<Jet>(int, int, int, std::span<const Jet>,
                                                std::span<const Jet>);

template <class T>
std::vector<T> interior_components(int n, int k, std::span<const T> v,
                                   std::span<const T> f) {
  if (k < 1) throw DomainError("interior product on a degree-0 form");
  const ComboTable& ct_in = combo_table(n, k);
  const ComboTable& ct_out = combo_table(n, k - 1);
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(ct_out.count()));
  std::vector<int> tuple(static_cast<std::size_t>(k));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& J = ct_out.combo(r);
    T s = [&] {
      if constexpr (std::is_same_v<T, Jet>)
        return Jet::constant_like(v[0], 0.0);
      else
        return 0.0;
    }();
    for (int m = 0; m < n; ++m) {
      tuple[0] = m;
      for (int t = 0; t < k - 1; ++t) tuple[static_cast<std::size_t>(t + 1)] = J[static_cast<std::size_t>(t)];
      const auto rs = ct_in.rank_signed(tuple);
      if (rs.sign == 0) continue;
      const T term = v[static_cast<std::size_t>(m)] * f[static_cast<std::size_t>(rs.rank)];
      s = (rs.sign > 0) ? s + term : s - term;
    }
    out.push_back(std::move(s));
  }
  return out;
}

template std::vector<double> interior_components<double>(int, int, std::span<const double>,
                                                         std::span<const double>);
template std::vector<Jet> interior_components<Jet>(int, int, std::span<const Jet>,
                                                   std::span<const Jet>);

FormValue raise_indices(int n, int k, std::span<const double> f, const Eigen::MatrixXd& ginv) {
  const ComboTable& ct = combo_table(n, k);
  const int C = ct.count();
  FormValue out(static_cast<std::size_t>(C), 0.0);
  if (k == 0) {
    out[0] = f[0];
    return out;
  }
  Eigen::MatrixXd minor(k, k);
  for (int r = 0; r < C; ++r) {
    const auto& I = ct.combo(r);
    double s = 0.0;
    for (int c = 0; c < C; ++c) {
      const auto& J = ct.combo(c);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = ginv(I[static_cast<std::size_t>(i)], J[static_cast<std::size_t>(j)]);
      s += minor.determinant() * f[static_cast<std::size_t>(c)];
    }
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

double form_inner(int n, int k, std::span<const double> a, std::span<const double> b,
                  const Eigen::MatrixXd& ginv) {
  const FormValue braised = raise_indices(n, k, b, ginv);
  double s = 0.0;
  for (std::size_t t = 0; t < braised.size(); ++t) s += a[t] * braised[t];
  return s;
}

JetVec eval_form_jets(const FormField& f, std::span<const Jet> coords) {
  JetVec comps = f.components(coords);
  if (static_cast<long>(comps.size()) != binom(f.dim, f.degree))
    throw DomainError("form evaluator returned wrong component count");
  return comps;
}

FormValue eval_form(const FormField& f, const Point& x) {
  const JetVec coords = lift_point(x, f.jet_order_overhead);
  const JetVec comps = eval_form_jets(f, coords);
  FormValue out(comps.size());
  for (std::size_t t = 0; t < comps.size(); ++t) out[t] = comps[t].value();
  return out;
}

FormField exterior_derivative(const FormField& f) {
  FormField df;
  df.dim = f.dim;
  df.degree = f.degree + 1;
  df.metric = f.metric;
  df.jet_order_overhead = f.jet_order_overhead + 1;
  df.label = "d(" + f.label + ")";
  if (f.degree >= f.dim) {
    // Top-degree input: the derivative has no components on this chart.
    df.label += " [trivially zero]";
    df.components = [](std::span<const Jet>) { return JetVec{}; };
    return df;
  }
  const int n = f.dim;
  const int k = f.degree;
  const FieldFn inner = f.components;
  df.components = [n, k, inner](std::span<const Jet> coords) {
    const JetVec sigma = inner(coords);
    const ComboTable& ct_out = combo_table(n, k + 1);
    const ComboTable& ct_in = combo_table(n, k);
    JetVec out;
    out.reserve(static_cast<std::size_t>(ct_out.count()));
    std::vector<int> sub(static_cast<std::size_t>(k));
    for (int r = 0; r < ct_out.count(); ++r) {
      const auto& K = ct_out.combo(r);
      Jet s = Jet::constant_like(coords[0], 0.0).truncated(
          std::max(0, sigma.empty() ? 0 : sigma[0].order() - 1));
      for (int j = 0; j <= k; ++j) {
        int t = 0;
        for (int q = 0; q <= k; ++q)
          if (q != j) sub[static_cast<std::size_t>(t++)] = K[static_cast<std::size_t>(q)];
        const Jet d = sigma[static_cast<std::size_t>(ct_in.rank(sub))].derive(K[static_cast<std::size_t>(j)]);
        s = (j % 2 == 0) ? s + d : s - d;
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  return df;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.dim != b.dim) throw DomainError("wedge: mixed charts");
  if (a.degree + b.degree > a.dim) throw DomainError("wedge: degree overflow");
  FormField w;
  w.dim = a.dim;
  w.degree = a.degree + b.degree;
  w.metric = a.metric ? a.metric : b.metric;
  w.jet_order_overhead = std::max(a.jet_order_overhead, b.jet_order_overhead);
  w.label = "(" + a.label + ")^(" + b.label + ")";
  const int n = a.dim, p = a.degree, q = b.degree;
  const FieldFn fa = a.components, fb = b.components;
  w.components = [n, p, q, fa, fb](std::span<const Jet> coords) {
    const JetVec av = fa(coords);
    const JetVec bv = fb(coords);
    return wedge_components<Jet>(n, p, q, av, bv);
  };
  return w;
}

std::vector<double> nabla_form_tensor(const FormField& f, const Point& x) {
  if (!f.metric) throw DomainError("covariant derivative needs a metric");
  const int n = f.dim, k = f.degree;
  const int lift = 1 + std::max(max_overhead(f), f.metric->jet_order_overhead);
  const JetVec coords = lift_point(x, lift);
  const JetVec sigma = eval_form_jets(f, coords);
  const JetMat g = metric_jets(*f.metric, coords);
  const JetMat ginv = jet_mat_inverse(g);
  const JetVec gamma = christoffel_jets(g, ginv);
  const JetVec nt = nabla_form_jets(n, k, sigma, gamma);
  std::vector<double> out(nt.size());
  for (std::size_t t = 0; t < nt.size(); ++t) out[t] = nt[t].value();
  return out;
}

FormValue covariant_derivative_form(const FormField& f, std::span<const double> X,
                                    const Point& x) {
  const int n = f.dim;
  const long C = binom(n, f.degree);
  const std::vector<double> nt = nabla_form_tensor(f, x);
  FormValue out(static_cast<std::size_t>(C), 0.0);
  for (int m = 0; m < n; ++m)
    for (long r = 0; r < C; ++r)
      out[static_cast<std::size_t>(r)] += X[static_cast<std::size_t>(m)] *
                                          nt[static_cast<std::size_t>(m * C + r)];
  return out;
}

FormValue codifferential(const FormField& f, const Point& x) {
  if (!f.metric) throw DomainError("codifferential needs a metric");
  if (f.degree < 1) throw DomainError("codifferential of a degree-0 form");
  const int n = f.dim, k = f.degree;
  const std::vector<double> nt = nabla_form_tensor(f, x);
  const MetricAtPoint mv = metric_values(*f.metric, x);
  const ComboTable& ct_in = combo_table(n, k);
  const ComboTable& ct_out = combo_table(n, k - 1);
  const long C = ct_in.count();
  FormValue out(static_cast<std::size_t>(ct_out.count()), 0.0);
  std::vector<int> tuple(static_cast<std::size_t>(k));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& J = ct_out.combo(r);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        tuple[0] = b;
        for (int t = 0; t < k - 1; ++t) tuple[static_cast<std::size_t>(t + 1)] = J[static_cast<std::size_t>(t)];
        const auto rs = ct_in.rank_signed(tuple);
        if (rs.sign == 0) continue;
        s -= mv.ginv[static_cast<std::size_t>(a * n + b)] * rs.sign *
             nt[static_cast<std::size_t>(a * C + rs.rank)];
      }
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

FormField codifferential_field(const FormField& f) {
  if (!f.metric) throw DomainError("codifferential needs a metric");
  if (f.degree < 1) throw DomainError("codifferential of a degree-0 form");
  FormField out;
  out.dim = f.dim;
  out.degree = f.degree - 1;
  out.metric = f.metric;
  out.jet_order_overhead = 1 + std::max(max_overhead(f), f.metric->jet_order_overhead);
  out.label = "d*(" + f.label + ")";
  const int n = f.dim, k = f.degree;
  const FieldFn inner = f.components;
  const MetricPtr metric = f.metric;
  out.components = [n, k, inner, metric](std::span<const Jet> coords) {
    const JetVec sigma = inner(coords);
    const JetMat g = metric_jets(*metric, coords);
    const JetMat ginv = jet_mat_inverse(g);
    const JetVec gamma = christoffel_jets(g, ginv);
    const JetVec nt = nabla_form_jets(n, k, sigma, gamma);
    const ComboTable& ct_in = combo_table(n, k);
    const ComboTable& ct_out = combo_table(n, k - 1);
    const long C = ct_in.count();
    JetVec outv;
    outv.reserve(static_cast<std::size_t>(ct_out.count()));
    std::vector<int> tuple(static_cast<std::size_t>(k));
    for (int r = 0; r < ct_out.count(); ++r) {
      const auto& J = ct_out.combo(r);
      Jet s = nt[0] * 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          tuple[0] = b;
          for (int t = 0; t < k - 1; ++t) tuple[static_cast<std::size_t>(t + 1)] = J[static_cast<std::size_t>(t)];
          const auto rs = ct_in.rank_signed(tuple);
          if (rs.sign == 0) continue;
          const Jet term = ginv.at(a, b) * nt[static_cast<std::size_t>(a * C + rs.rank)];
          s = (rs.sign > 0) ? s - term : s + term;
        }
      outv.push_back(std::move(s));
    }
    return outv;
  };
  return out;
}

FormValue interior_product(std::span<const double> v, const FormField& f, const Point& x) {
  const FormValue fv = eval_form(f, x);
  return interior_components<double>(f.dim, f.degree, v, fv);
}

FormValue hodge_star(const FormField& f, const Point& x, std::optional<int> orientation) {
  if (!f.metric) throw DomainError("hodge star needs a metric");
  const int n = f.dim, k = f.degree;
  const MetricAtPoint mv = metric_values(*f.metric, x);
  Eigen::MatrixXd g(n, n), ginv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = mv.g[static_cast<std::size_t>(i * n + j)];
      ginv(i, j) = mv.ginv[static_cast<std::size_t>(i * n + j)];
    }
  const double det = g.determinant();
  if (det <= 0.0) throw DomainError("hodge star: metric not positive definite", x);
  const double vol = std::sqrt(det) * static_cast<double>(orientation.value_or(f.metric->orientation));

  const FormValue fv = eval_form(f, x);
  const FormValue raised = raise_indices(n, k, fv, ginv);
  const ComboTable& ct_in = combo_table(n, k);
  const ComboTable& ct_out = combo_table(n, n - k);
  FormValue out(static_cast<std::size_t>(ct_out.count()), 0.0);
  std::vector<int> comp(static_cast<std::size_t>(k));
  for (int r = 0; r < ct_out.count(); ++r) {
    const auto& J = ct_out.combo(r);
    // complement of J in {0..n-1}
    int t = 0;
    for (int v = 0; v < n; ++v) {
      bool in_j = false;
      for (int u : J)
        if (u == v) in_j = true;
      if (!in_j) comp[static_cast<std::size_t>(t++)] = v;
    }
    const int sign = split_sign(std::span<const int>(comp.data(), comp.size()),
                                std::span<const int>(J.data(), J.size()));
    out[static_cast<std::size_t>(r)] =
        vol * sign * raised[static_cast<std::size_t>(ct_in.rank(comp))];
  }
  return out;
}

FormField constant_form(int n, int degree, FormValue components, MetricPtr metric,
                        std::string label) {
  FormField f;
  f.dim = n;
  f.degree = degree;
  f.metric = std::move(metric);
  f.label = std::move(label);
  if (static_cast<long>(components.size()) != binom(n, degree))
    throw DomainError("constant_form: wrong component count");
  f.components = [components](std::span<const Jet> coords) {
    JetVec out;
    out.reserve(components.size());
    for (double c : components) out.push_back(Jet::constant_like(coords[0], c));
    return out;
  };
  return f;
}

}  // namespace umb
