#include "umb/metric.hpp"

namespace umb {

JetMat metric_jets(const MetricField& m, std::span<const Jet> coords) {
  JetVec comps = m.components(coords);
  if (static_cast<int>(comps.size()) != m.dim * m.dim)
    throw DomainError("metric evaluator returned wrong component count");
  JetMat g;
  g.rows = g.cols = m.dim;
  g.e = std::move(comps);
  return g;
}

JetVec christoffel_jets(const JetMat& g, const JetMat& ginv) {
  const int n = g.rows;
  // dg[l] = matrix of partials D_l g_ij, one order below g.
  std::vector<JetMat> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    JetMat m(n, n, g.at(0, 0).derive(l));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = g.at(i, j).derive(l);
    dg.push_back(std::move(m));
  }

  JetVec gamma(static_cast<std::size_t>(n * n * n), Jet::constant_like(dg[0].at(0, 0), 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = Jet::constant_like(dg[0].at(0, 0), 0.0);
        for (int l = 0; l < n; ++l)
          s = s + ginv.at(k, l) * (dg[static_cast<std::size_t>(i)].at(j, l) +
                                   dg[static_cast<std::size_t>(j)].at(i, l) -
                                   dg[static_cast<std::size_t>(l)].at(i, j));
        s = s * 0.5;
        gamma[static_cast<std::size_t>((k * n + i) * n + j)] = s;
        gamma[static_cast<std::size_t>((k * n + j) * n + i)] = s;
      }
  return gamma;
}

std::vector<double> christoffels(const MetricField& m, const Point& x) {
  const int n = m.dim;
  const JetVec coords = lift_point(x, 1 + m.jet_order_overhead);
  JetMat g;
  try {
    g = metric_jets(m, coords);
  } catch (const DomainError& e) {
    throw DomainError(e.what(), x);
  }
  const JetMat ginv = jet_mat_inverse(g);
  const JetVec gamma = christoffel_jets(g, ginv);
  std::vector<double> out(static_cast<std::size_t>(n * n * n));
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = gamma[t].value();
  return out;
}

MetricAtPoint metric_values(const MetricField& m, const Point& x) {
  const int n = m.dim;
  const JetVec coords = lift_point(x, 0 + m.jet_order_overhead);
  const JetMat g = metric_jets(m, coords);
  const JetMat ginv = jet_mat_inverse(g);
  MetricAtPoint out;
  out.g.resize(static_cast<std::size_t>(n * n));
  out.ginv.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.g[static_cast<std::size_t>(i * n + j)] = g.at(i, j).value();
      out.ginv[static_cast<std::size_t>(i * n + j)] = ginv.at(i, j).value();
    }
  return out;
}

}  // namespace umb
