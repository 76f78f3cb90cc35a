#include "umb/holonomy.hpp"

#include <cmath>
#include <random>

namespace umb {

namespace {

// Connection action A^g_d = Gamma^g_{b d} c'^b at a curve point.
Eigen::MatrixXd connection_action(const MetricField& m, const Point& x,
                                  const Eigen::VectorXd& velocity) {
  const int n = m.dim;
  if (!m.domain.lo.empty() && !m.domain.contains(x))
    throw DomainError("curve exits the chart domain", x);
  const std::vector<double> gamma = christoffels(m, x);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int g = 0; g < n; ++g)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int b = 0; b < n; ++b)
        s += gamma[static_cast<std::size_t>((g * n + b) * n + d)] * velocity(b);
      a(g, d) = s;
    }
  return a;
}

struct CurvePoint {
  Point x;
  Eigen::VectorXd v;
};

CurvePoint curve_at(const CurveSegment& seg, double s, int dim_hint) {
  const Jet sj = Jet::variable(0, s, 1, 1);
  const JetVec p = seg.map(sj);
  CurvePoint cp;
  cp.x.resize(p.size());
  cp.v.resize(static_cast<long>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp.x[i] = p[i].value();
    cp.v(static_cast<long>(i)) = p[i].d1(0);
  }
  (void)dim_hint;
  return cp;
}

// RK4 for the linear ODE M' = -A(s) M over one segment. The connection
// matrix depends only on s, so the two midpoint stages share one evaluation
// and each step's endpoint serves as the next step's start.
void transport_segment(const MetricField& m, const CurveSegment& seg, int steps,
                       Eigen::MatrixXd& frame) {
  const double h = 1.0 / steps;
  const auto action = [&](double s) {
    const CurvePoint cp = curve_at(seg, s, m.dim);
    return connection_action(m, cp.x, cp.v);
  };
  Eigen::MatrixXd a0 = action(0.0);
  for (int i = 0; i < steps; ++i) {
    const double s0 = i * h;
    const Eigen::MatrixXd amid = action(s0 + 0.5 * h);
    const Eigen::MatrixXd a1 = action(s0 + h);
    const Eigen::MatrixXd k1 = -a0 * frame;
    const Eigen::MatrixXd k2 = -amid * (frame + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = -amid * (frame + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = -a1 * (frame + h * k3);
    frame += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    a0 = a1;
  }
}

// Infinitesimal slotwise action of a matrix a on k-form components:
// (a . w)_I = sum_slots sum_p a^p_{i_j} w_{i1..p..ik}.
FormValue slotwise_action(int n, int k, const Eigen::MatrixXd& a, const FormValue& w) {
  const ComboTable& ct = combo_table(n, k);
  FormValue out(w.size(), 0.0);
  std::vector<int> tuple(static_cast<std::size_t>(k));
  for (int r = 0; r < ct.count(); ++r) {
    const auto& I = ct.combo(r);
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      for (int t = 0; t < k; ++t) tuple[static_cast<std::size_t>(t)] = I[static_cast<std::size_t>(t)];
      for (int p = 0; p < n; ++p) {
        tuple[static_cast<std::size_t>(j)] = p;
        const auto rs = ct.rank_signed(tuple);
        if (rs.sign == 0) continue;
        s += a(p, I[static_cast<std::size_t>(j)]) * rs.sign * w[static_cast<std::size_t>(rs.rank)];
      }
      tuple[static_cast<std::size_t>(j)] = I[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

Eigen::MatrixXd orthonormal_frame(const MetricField& m, const Point& x) {
  const MetricAtPoint mv = metric_values(m, x);
  const int n = m.dim;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = mv.g[static_cast<std::size_t>(i * n + j)];
  const Eigen::MatrixXd L = g.llt().matrixL();
  return L.transpose().inverse();  // columns: g-orthonormal frame
}

int rank_with_threshold(const Eigen::MatrixXd& columns, double* tol_used = nullptr) {
  if (columns.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  const Eigen::VectorXd sv = svd.singularValues();
  const double tol = std::max(1e-6 * sv(0), 1e-9);
  if (tol_used) *tol_used = tol;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

}  // namespace

CurveSegment line_segment(const Point& a, const Point& b) {
  CurveSegment seg;
  seg.map = [a, b](const Jet& s) {
    JetVec out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.push_back(s * (b[i] - a[i]) + a[i]);
    return out;
  };
  return seg;
}

Eigen::MatrixXd parallel_transport_matrix(const MetricField& m, const LoopSpec& loop) {
  const int n = m.dim;
  // the segment chain must close up at the base point
  {
    const CurvePoint first = curve_at(loop.segments.front(), 0.0, n);
    const CurvePoint last = curve_at(loop.segments.back(), 1.0, n);
    for (int i = 0; i < n; ++i)
      if (std::abs(first.x[static_cast<std::size_t>(i)] - last.x[static_cast<std::size_t>(i)]) > 1e-10)
        throw DomainError("loop is not closed", loop.base_point);
  }
  Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(n, n);
  const int per_segment =
      std::max(16, loop.step_count / std::max(1, static_cast<int>(loop.segments.size())));
  for (const CurveSegment& seg : loop.segments) transport_segment(m, seg, per_segment, frame);
  return frame;
}

Eigen::VectorXd parallel_transport_vector(const MetricField& m,
                                          const std::vector<CurveSegment>& path,
                                          const Eigen::VectorXd& v0, int steps) {
  if (steps < 16) throw DomainError("parallel transport needs at least 16 steps");
  const int n = m.dim;
  Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(n, n);
  for (const CurveSegment& seg : path)
    transport_segment(m, seg, std::max(16, steps / static_cast<int>(path.size())), frame);
  return frame * v0;
}

FormValue parallel_transport_form(const MetricField& m, const std::vector<CurveSegment>& path,
                                  int degree, const FormValue& w0, int steps) {
  const int n = m.dim;
  FormValue w = w0;
  const int per_segment = std::max(16, steps / std::max(1, static_cast<int>(path.size())));
  const double h = 1.0 / per_segment;
  // Parallel covector components satisfy w_p' = +Gamma^g_{b p} c'^b w_g;
  // slotwise that is the action of the connection matrix itself.
  const auto axpy = [](const FormValue& base, const FormValue& d, double c) {
    FormValue r = base;
    for (std::size_t t = 0; t < r.size(); ++t) r[t] += c * d[t];
    return r;
  };
  for (const CurveSegment& seg : path) {
    const auto action = [&](double s) {
      const CurvePoint cp = curve_at(seg, s, n);
      return connection_action(m, cp.x, cp.v);
    };
    Eigen::MatrixXd a0 = action(0.0);
    for (int i = 0; i < per_segment; ++i) {
      const double s0 = i * h;
      const Eigen::MatrixXd amid = action(s0 + 0.5 * h);
      const Eigen::MatrixXd a1 = action(s0 + h);
      const FormValue k1 = slotwise_action(n, degree, a0, w);
      const FormValue k2 = slotwise_action(n, degree, amid, axpy(w, k1, 0.5 * h));
      const FormValue k3 = slotwise_action(n, degree, amid, axpy(w, k2, 0.5 * h));
      const FormValue k4 = slotwise_action(n, degree, a1, axpy(w, k3, h));
      for (std::size_t t = 0; t < w.size(); ++t)
        w[t] += (h / 6.0) * (k1[t] + 2.0 * k2[t] + 2.0 * k3[t] + k4[t]);
      a0 = a1;
    }
  }
  return w;
}

Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& a, int k) {
  const int n = static_cast<int>(a.rows());
  const ComboTable& ct = combo_table(n, k);
  const int C = ct.count();
  Eigen::MatrixXd out(C, C);
  Eigen::MatrixXd minor(k, k);
  for (int r = 0; r < C; ++r)
    for (int c = 0; c < C; ++c) {
      const auto& I = ct.combo(r);
      const auto& J = ct.combo(c);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = a(I[static_cast<std::size_t>(i)], J[static_cast<std::size_t>(j)]);
      out(r, c) = k == 0 ? 1.0 : minor.determinant();
    }
  return out;
}

int curvature_span_dimension(const MetricField& m, const Point& x,
                             bool include_first_derivative) {
  const int n = m.dim;
  const CurvatureAtPoint c = curvature(m, x);
  const Eigen::MatrixXd op = curvature_operator(c);
  const int C2 = static_cast<int>(op.rows());

  if (!include_first_derivative) return rank_with_threshold(op);

  // Augment with the slices of nabla R, expressed in the same orthonormal
  // frame: each (m0, i<j) yields a 2-form column (nabla_m R)(E_i, E_j, ., .).
  const std::vector<double> nr = riemann_covariant_derivative(m, x);
  const Eigen::MatrixXd frame = orthonormal_frame(m, x);
  const auto nridx = [n](int mm, int i, int j, int k, int l) {
    return static_cast<std::size_t>((((mm * n + i) * n + j) * n + k) * n + l);
  };
  // transform the last four indices to the frame (the derivative slot m0 can
  // stay in coordinates: the span over m0 is unaffected by a basis change).
  const ComboTable& pairs = combo_table(n, 2);
  std::vector<Eigen::MatrixXd> cols;
  for (int mm = 0; mm < n; ++mm) {
    // R5[m][ijkl] -> frame on i,j,k,l
    std::vector<double> a(static_cast<std::size_t>(n * n * n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            a[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] = nr[nridx(mm, i, j, k, l)];
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
              for (int p = 0; p < n; ++p) b[idx(j, k, l, p)] += v * frame(i, p);
            }
      std::swap(a, b);
    }
    Eigen::MatrixXd block(C2, C2);
    for (int r = 0; r < C2; ++r)
      for (int cc = 0; cc < C2; ++cc) {
        const auto& I = pairs.combo(r);
        const auto& J = pairs.combo(cc);
        block(r, cc) = -a[idx(I[0], I[1], J[0], J[1])];
      }
    cols.push_back(block);
  }
  Eigen::MatrixXd all(C2, C2 * (1 + n));
  all.block(0, 0, C2, C2) = op;
  for (int mm = 0; mm < n; ++mm) all.block(0, C2 * (1 + mm), C2, C2) = cols[static_cast<std::size_t>(mm)];
  return rank_with_threshold(all);
}

int loop_holonomy_rank(const MetricField& m, const std::vector<LoopSpec>& loops) {
  const int n = m.dim;
  const ComboTable& pairs = combo_table(n, 2);
  const int C2 = pairs.count();
  Eigen::MatrixXd cols(C2, static_cast<int>(loops.size()));
  int c = 0;
  for (const LoopSpec& loop : loops) {
    const Eigen::MatrixXd frame = orthonormal_frame(m, loop.base_point);
    const Eigen::MatrixXd h = frame.inverse() * parallel_transport_matrix(m, loop) * frame;
    const Eigen::MatrixXd skew = 0.5 * (h - h.transpose());
    for (int r = 0; r < C2; ++r) {
      const auto& I = pairs.combo(r);
      cols(r, c) = skew(I[0], I[1]);
    }
    ++c;
  }
  return rank_with_threshold(cols);
}

FixedFormSubspace fixed_form_subspace(const MetricField& m, const std::vector<LoopSpec>& loops,
                                      int degree, Exec exec) {
  if (loops.size() < 20)
    throw DomainError("fixed_form_subspace: need at least 20 loops");
  const Point base = loops.front().base_point;
  for (const LoopSpec& l : loops)
    if (l.base_point != base)
      throw DomainError("fixed_form_subspace: loops must share the base point");

  const int n = m.dim;
  const ComboTable& ct = combo_table(n, degree);
  const int C = ct.count();
  const Eigen::MatrixXd frame = orthonormal_frame(m, base);
  const Eigen::MatrixXd frame_k = exterior_power(frame, degree);

  // Induced transports on Lambda^k in the orthonormal frame. Forms transform
  // by the inverse transpose of the tangent transport.
  std::vector<Eigen::MatrixXd> qs(loops.size());
  for_each_index(loops.size(), exec, [&](std::size_t i) {
    const Eigen::MatrixXd h = frame.inverse() * parallel_transport_matrix(m, loops[i]) * frame;
    qs[i] = exterior_power(Eigen::MatrixXd(h.inverse().transpose()), degree);
  });

  Eigen::MatrixXd stack(static_cast<int>(loops.size()) * C, C);
  for (std::size_t i = 0; i < loops.size(); ++i)
    stack.block(static_cast<int>(i) * C, 0, C, C) = qs[i] - Eigen::MatrixXd::Identity(C, C);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = std::max(1e-6 * smax, 1e-9);

  FixedFormSubspace out;
  out.degree = degree;
  out.tolerance_used = tol;
  out.loop_count = static_cast<int>(loops.size());
  std::vector<int> fixed_cols;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) fixed_cols.push_back(i);
  // When the whole stack is numerically zero (flat chart) every direction is
  // fixed; JacobiSVD still lists C singular values, all below tol.
  out.dimension = static_cast<int>(fixed_cols.size());
  out.basis.resize(C, out.dimension);
  for (int c = 0; c < out.dimension; ++c)
    out.basis.col(c) = svd.matrixV().col(fixed_cols[static_cast<std::size_t>(c)]);

  // Back to coordinate components: sigma_I = sum_J sigmahat_J det(Binv[J,I]).
  const Eigen::MatrixXd frame_inv_k = exterior_power(Eigen::MatrixXd(frame.inverse()), degree);
  out.basis = frame_inv_k.transpose() * out.basis;

  // nabla residual of each representative, extended off the base point by
  // radial parallel transport and differentiated by central differences plus
  // the connection terms.
  const double h = 1e-3;
  const int steps = 128;
  for (int c = 0; c < out.dimension; ++c) {
    FormValue w0(static_cast<std::size_t>(C));
    for (int r = 0; r < C; ++r) w0[static_cast<std::size_t>(r)] = out.basis(r, c);
    const auto extended = [&](const Point& q) {
      return parallel_transport_form(m, {line_segment(base, q)}, degree, w0, steps);
    };
    double worst = 0.0;
    const std::vector<Point> probes = sample_points(
        ChartDomain::box(Point(base.size(), -0.15), Point(base.size(), 0.15)), 6, 3);
    for (const Point& dq : probes) {
      Point q = base;
      for (std::size_t t = 0; t < q.size(); ++t) q[t] += dq[t];
      const std::vector<double> gamma = christoffels(m, q);
      const FormValue wq = extended(q);
      for (int mm = 0; mm < n; ++mm) {
        Point qp = q, qm = q;
        qp[static_cast<std::size_t>(mm)] += h;
        qm[static_cast<std::size_t>(mm)] -= h;
        const FormValue wp = extended(qp);
        const FormValue wm = extended(qm);
        std::vector<int> tuple(static_cast<std::size_t>(degree));
        for (int r = 0; r < C; ++r) {
          double s = (wp[static_cast<std::size_t>(r)] - wm[static_cast<std::size_t>(r)]) / (2.0 * h);
          const auto& I = ct.combo(r);
          for (int j = 0; j < degree; ++j) {
            for (int t = 0; t < degree; ++t) tuple[static_cast<std::size_t>(t)] = I[static_cast<std::size_t>(t)];
            for (int p = 0; p < n; ++p) {
              tuple[static_cast<std::size_t>(j)] = p;
              const auto rs = ct.rank_signed(tuple);
              if (rs.sign == 0) continue;
              s -= gamma[static_cast<std::size_t>((p * n + mm) * n + I[static_cast<std::size_t>(j)])] *
                   rs.sign * wq[static_cast<std::size_t>(rs.rank)];
            }
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
    out.nabla_residuals.push_back(worst);
  }
  return out;
}

std::vector<LoopSpec> standard_loop_family(const MetricField& m, const Point& base,
                                           std::uint64_t seed) {
  const int n = m.dim;
  std::vector<LoopSpec> loops;

  double extent = 1e30;
  for (int i = 0; i < n; ++i)
    extent = std::min(extent, m.domain.hi[static_cast<std::size_t>(i)] - m.domain.lo[static_cast<std::size_t>(i)]);

  // Parallelograms in every coordinate plane at three scales.
  for (const double scale : {0.06, 0.12, 0.2}) {
    const double d = scale * extent;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Point p1 = base, p2 = base, p3 = base;
        p1[static_cast<std::size_t>(i)] += d;
        p2[static_cast<std::size_t>(i)] += d;
        p2[static_cast<std::size_t>(j)] += d;
        p3[static_cast<std::size_t>(j)] += d;
        LoopSpec loop;
        loop.base_point = base;
        loop.segments = {line_segment(base, p1), line_segment(p1, p2), line_segment(p2, p3),
                         line_segment(p3, base)};
        loops.push_back(std::move(loop));
      }
  }

  // Smooth seeded Fourier loops, closed by construction; at least eight, and
  // enough to keep the whole family above the 20-loop floor in low dimension.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  const int random_count = std::max(8, 21 - static_cast<int>(loops.size()));
  for (int rep = 0; rep < random_count; ++rep) {
    std::vector<double> a1(static_cast<std::size_t>(n)), b1(static_cast<std::size_t>(n)),
        a2(static_cast<std::size_t>(n)), b2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a1[static_cast<std::size_t>(i)] = amp(rng) * extent;
      b1[static_cast<std::size_t>(i)] = amp(rng) * extent;
      a2[static_cast<std::size_t>(i)] = 0.5 * amp(rng) * extent;
      b2[static_cast<std::size_t>(i)] = 0.5 * amp(rng) * extent;
    }
    CurveSegment seg;
    const Point p = base;
    seg.map = [p, a1, b1, a2, b2, n](const Jet& s) {
      const double two_pi = 2.0 * 3.14159265358979323846;
      JetVec out;
      out.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const Jet arg1 = s * two_pi;
        const Jet arg2 = s * (2.0 * two_pi);
        out.push_back(p[static_cast<std::size_t>(i)] + sin(arg1) * a1[static_cast<std::size_t>(i)] +
                      (cos(arg1) - 1.0) * b1[static_cast<std::size_t>(i)] +
                      sin(arg2) * a2[static_cast<std::size_t>(i)] +
                      (cos(arg2) - 1.0) * b2[static_cast<std::size_t>(i)]);
      }
      return out;
    };
    LoopSpec loop;
    loop.base_point = base;
    loop.segments = {seg};
    loop.step_count = 1024;
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace umb
