#include "umb/curvature.hpp"

#include "umb/combi.hpp"

namespace umb {

namespace {

struct CurvatureJets {
  int n = 0;
  JetMat g;
  JetMat ginv;
  JetVec gamma;    // order metric-1
  JetVec riemann;  // R_{ijkl} jets, order metric-2
};

// Assemble R_{ijkl} = g_{lm} R^m_{kij} with
// R^l_{kij} = D_i Gamma^l_{jk} - D_j Gamma^l_{ik}
//           + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.
CurvatureJets curvature_jets(const MetricField& m, const Point& x, int metric_order) {
  const int n = m.dim;
  CurvatureJets out;
  out.n = n;
  const JetVec coords = lift_point(x, metric_order + m.jet_order_overhead);
  try {
    out.g = metric_jets(m, coords);
    out.ginv = jet_mat_inverse(out.g);
  } catch (const DomainError& e) {
    throw DomainError(e.what(), x);
  }
  out.gamma = christoffel_jets(out.g, out.ginv);

  const auto G = [&](int k, int i, int j) -> const Jet& {
    return out.gamma[static_cast<std::size_t>((k * n + i) * n + j)];
  };

  const Jet zero_lo = G(0, 0, 0).derive(0) * 0.0;
  JetVec upper(static_cast<std::size_t>(n * n * n * n), zero_lo);  // R^l_{kij}: ((l*n+k)*n+i)*n+j
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Jet s = G(l, j, k).derive(i) - G(l, i, k).derive(j);
          for (int mm = 0; mm < n; ++mm)
            s = s + G(l, i, mm) * G(mm, j, k) - G(l, j, mm) * G(mm, i, k);
          upper[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)] = s;
          upper[static_cast<std::size_t>(((l * n + k) * n + j) * n + i)] = -s;
        }

  out.riemann.assign(static_cast<std::size_t>(n * n * n * n), zero_lo);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet s = zero_lo;
          for (int mm = 0; mm < n; ++mm)
            s = s + out.g.at(l, mm) * upper[static_cast<std::size_t>(((mm * n + k) * n + i) * n + j)];
          out.riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] = s;
        }
    }
  return out;
}

}  // namespace

CurvatureAtPoint curvature(const MetricField& m, const Point& x) {
  const CurvatureJets cj = curvature_jets(m, x, 2);
  const int n = cj.n;
  CurvatureAtPoint c;
  c.dim = n;
  c.point = x;
  c.riemann.resize(cj.riemann.size());
  for (std::size_t t = 0; t < cj.riemann.size(); ++t) c.riemann[t] = cj.riemann[t].value();
  c.g.resize(static_cast<std::size_t>(n * n));
  c.ginv.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      c.g[static_cast<std::size_t>(i * n + j)] = cj.g.at(i, j).value();
      c.ginv[static_cast<std::size_t>(i * n + j)] = cj.ginv.at(i, j).value();
    }
  // Ric_{jk} = g^{il} R_{ijkl}
  c.ricci.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
          s += c.ginv[static_cast<std::size_t>(i * n + l)] * c.rm(i, j, k, l);
      c.ricci[static_cast<std::size_t>(j * n + k)] = s;
    }
  c.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      c.scalar += c.ginv[static_cast<std::size_t>(j * n + k)] * c.ricci[static_cast<std::size_t>(j * n + k)];
  return c;
}

std::vector<double> riemann_covariant_derivative(const MetricField& m, const Point& x) {
  const CurvatureJets cj = curvature_jets(m, x, 3);
  const int n = cj.n;
  const auto G = [&](int k, int i, int j) {
    return cj.gamma[static_cast<std::size_t>((k * n + i) * n + j)].value();
  };
  const auto R = [&](int i, int j, int k, int l) {
    return cj.riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)].value();
  };
  std::vector<double> out(static_cast<std::size_t>(n * n * n * n * n), 0.0);
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double s = cj.riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)].d1(mm);
            for (int p = 0; p < n; ++p)
              s -= G(p, mm, i) * R(p, j, k, l) + G(p, mm, j) * R(i, p, k, l) +
                   G(p, mm, k) * R(i, j, p, l) + G(p, mm, l) * R(i, j, k, p);
            out[static_cast<std::size_t>((((mm * n + i) * n + j) * n + k) * n + l)] = s;
          }
  return out;
}

double sectional_curvature(const CurvatureAtPoint& c, std::span<const double> X,
                           std::span<const double> Y) {
  const int n = c.dim;
  double rxyyx = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          rxyyx += c.rm(i, j, k, l) * X[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(j)] *
                   Y[static_cast<std::size_t>(k)] * X[static_cast<std::size_t>(l)];
  auto ip = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += c.g[static_cast<std::size_t>(i * n + j)] * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
  };
  const double area2 = ip(X, X) * ip(Y, Y) - ip(X, Y) * ip(X, Y);
  if (area2 < 1e-14) throw DomainError("degenerate plane for sectional curvature", c.point);
  return rxyyx / area2;
}

Eigen::MatrixXd curvature_operator(const CurvatureAtPoint& c) {
  const int n = c.dim;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = c.g[static_cast<std::size_t>(i * n + j)];
  // g-orthonormal frame: columns of L^{-T} for g = L L^T.
  const Eigen::MatrixXd L = g.llt().matrixL();
  const Eigen::MatrixXd frame = L.transpose().inverse();

  // Transform one index at a time.
  std::vector<double> a = c.riemann;
  std::vector<double> b(a.size(), 0.0);
  const auto idx = [n](int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
  };
  for (int pass = 0; pass < 4; ++pass) {
    std::fill(b.begin(), b.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = a[idx(i, j, k, l)];
            if (v == 0.0) continue;
            // Contract the leading index with the frame, then rotate the
            // index order so four passes transform all four slots.
            for (int p = 0; p < n; ++p) b[idx(j, k, l, p)] += v * frame(i, p);
          }
    std::swap(a, b);
  }

  const ComboTable& pairs = combo_table(n, 2);
  const int m = pairs.count();
  Eigen::MatrixXd op(m, m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      const auto& I = pairs.combo(r);
      const auto& J = pairs.combo(s);
      op(r, s) = -a[idx(I[0], I[1], J[0], J[1])];
    }
  return op;
}

std::vector<double> ricci_direct(const MetricField& m, const Point& x) {
  const int n = m.dim;
  const JetVec coords = lift_point(x, 2 + m.jet_order_overhead);
  const JetMat g = metric_jets(m, coords);
  const JetMat ginv = jet_mat_inverse(g);
  const JetVec gamma = christoffel_jets(g, ginv);
  const auto G = [&](int k, int i, int j) -> const Jet& {
    return gamma[static_cast<std::size_t>((k * n + i) * n + j)];
  };
  // Ric_{jk} = D_i Gamma^i_{jk} - D_j Gamma^i_{ik}
  //          + Gamma^i_{im} Gamma^m_{jk} - Gamma^i_{jm} Gamma^m_{ik}
  std::vector<double> ric(static_cast<std::size_t>(n * n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += G(i, j, k).derive(i).value() - G(i, i, k).derive(j).value();
        for (int mm = 0; mm < n; ++mm)
          s += G(i, i, mm).value() * G(mm, j, k).value() -
               G(i, j, mm).value() * G(mm, i, k).value();
      }
      ric[static_cast<std::size_t>(j * n + k)] = s;
    }
  return ric;
}

}  // namespace umb
