#include "umb/cones.hpp"

#include <cmath>
#include <numbers>

namespace umb {

MetricPtr cone_metric(MetricPtr base, double t_lo, double t_hi) {
  if (!(t_lo > 0.0 && t_hi > t_lo))
    throw DomainError("cone_metric: radial range must sit inside (0, inf)");
  auto m = std::make_shared<MetricField>();
  const int n = base->dim;
  m->dim = n + 1;
  m->label = "cone(" + base->label + ")";
  m->domain = base->domain.extended(t_lo, t_hi);
  m->jet_order_overhead = base->jet_order_overhead;
  const MetricPtr b = std::move(base);
  m->components = [n, b](std::span<const Jet> x) {
    const Jet& t = x[static_cast<std::size_t>(n)];
    const JetVec gb = b->components(x.subspan(0, static_cast<std::size_t>(n)));
    const Jet t2 = t * t;
    const int na = n + 1;
    JetVec g(static_cast<std::size_t>(na * na), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g[static_cast<std::size_t>(i * na + j)] = gb[static_cast<std::size_t>(i * n + j)] * t2;
    g[static_cast<std::size_t>(n * na + n)] = Jet::constant_like(x[0], 1.0);
    return g;
  };
  return m;
}

MetricPtr sine_cone_join(MetricPtr g1, MetricPtr g2) {
  if (g1->dim < 1 || g2->dim < 1)
    throw DomainError("sine_cone_join: factor dimensions must be >= 1");
  auto m = std::make_shared<MetricField>();
  const int n1 = g1->dim, n2 = g2->dim;
  const int n = n1 + n2 + 1;
  m->dim = n;
  m->label = "sine_join(" + g1->label + ", " + g2->label + ")";
  // theta strictly inside (0, pi/2); the endpoints degenerate.
  m->domain = ChartDomain::product(g1->domain, g2->domain)
                  .extended(0.08, std::numbers::pi / 2 - 0.08);
  m->jet_order_overhead = std::max(g1->jet_order_overhead, g2->jet_order_overhead);
  const MetricPtr a = std::move(g1);
  const MetricPtr b = std::move(g2);
  m->components = [n1, n2, n, a, b](std::span<const Jet> x) {
    const Jet& th = x[static_cast<std::size_t>(n - 1)];
    const JetVec ga = a->components(x.subspan(0, static_cast<std::size_t>(n1)));
    const JetVec gb = b->components(x.subspan(static_cast<std::size_t>(n1), static_cast<std::size_t>(n2)));
    const Jet s2 = sin(th) * sin(th);
    const Jet c2 = cos(th) * cos(th);
    JetVec g(static_cast<std::size_t>(n * n), Jet::constant_like(x[0], 0.0));
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        g[static_cast<std::size_t>(i * n + j)] = ga[static_cast<std::size_t>(i * n1 + j)] * s2;
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j)
        g[static_cast<std::size_t>((n1 + i) * n + (n1 + j))] = gb[static_cast<std::size_t>(i * n2 + j)] * c2;
    g[static_cast<std::size_t>((n - 1) * n + (n - 1))] = Jet::constant_like(x[0], 1.0);
    return g;
  };
  return m;
}

ResidualSummary product_cone_isometry_residual(MetricPtr g1, MetricPtr g2,
                                               const std::vector<Point>& samples) {
  const int n1 = g1->dim, n2 = g2->dim;
  const int n = n1 + n2 + 2;  // (u1, u2, theta, r)
  const MetricPtr join = sine_cone_join(g1, g2);
  const MetricPtr cone_over_join = cone_metric(join, 0.3, 3.0);

  // Product-of-cones metric on (u1, t, u2, s) reordered as (u1, u2, t, s).
  const MetricPtr c1 = cone_metric(g1, 1e-6, 1e9);
  const MetricPtr c2 = cone_metric(g2, 1e-6, 1e9);

  ResidualSummary out;
  for (const Point& x : samples) {
    if (static_cast<int>(x.size()) != n)
      throw DomainError("product_cone_isometry_residual: sample has wrong dimension");
    const double theta = x[static_cast<std::size_t>(n1 + n2)];
    const double r = x[static_cast<std::size_t>(n1 + n2 + 1)];
    if (!(r > 0.0) || !(theta > 0.0 && theta < std::numbers::pi / 2))
      throw DomainError("product_cone_isometry_residual: degenerate sample", x);

    // Coordinate change Phi(u1, u2, theta, r) = (u1, t; u2, s).
    const JetVec lifted = lift_point(x, 1);
    JetVec phi;  // (u1..., t) then (u2..., s)
    for (int i = 0; i < n1; ++i) phi.push_back(lifted[static_cast<std::size_t>(i)]);
    phi.push_back(lifted[static_cast<std::size_t>(n - 1)] * sin(lifted[static_cast<std::size_t>(n - 2)]));
    for (int i = 0; i < n2; ++i) phi.push_back(lifted[static_cast<std::size_t>(n1 + i)]);
    phi.push_back(lifted[static_cast<std::size_t>(n - 1)] * cos(lifted[static_cast<std::size_t>(n - 2)]));

    // Block-diagonal product metric (t^2 g1 + dt^2) + (s^2 g2 + ds^2),
    // evaluated at the image point and composed with Phi.
    Point image(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i)].value();
    const JetVec im1 = lift_point(std::span<const double>(image.data(), static_cast<std::size_t>(n1 + 1)), 0);
    const JetVec im2 = lift_point(std::span<const double>(image.data() + n1 + 1, static_cast<std::size_t>(n2 + 1)), 0);
    const JetVec m1 = c1->components(im1);
    const JetVec m2 = c2->components(im2);

    // (Phi^* G)_{mu nu} = G_{AB} dPhi^A_mu dPhi^B_nu, block by block; the
    // product metric has no cross-block terms.
    const std::span<const Jet> phi1(phi.data(), static_cast<std::size_t>(n1 + 1));
    const std::span<const Jet> phi2(phi.data() + n1 + 1, static_cast<std::size_t>(n2 + 1));

    std::vector<std::vector<double>> pulled(static_cast<std::size_t>(n),
                                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const auto add_block = [&](const JetVec& gm, std::span<const Jet> ph, int bdim) {
      for (int A = 0; A < bdim; ++A)
        for (int B = 0; B < bdim; ++B) {
          const double gAB = gm[static_cast<std::size_t>(A * bdim + B)].value();
          if (gAB == 0.0) continue;
          for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu)
              pulled[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] +=
                  gAB * ph[static_cast<std::size_t>(A)].d1(mu) * ph[static_cast<std::size_t>(B)].d1(nu);
        }
    };
    add_block(m1, phi1, n1 + 1);
    add_block(m2, phi2, n2 + 1);

    // Reference: cone over the join at (u1, u2, theta, r).
    const JetVec ref = cone_over_join->components(lifted);
    double worst = 0.0;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu)
        worst = std::max(worst, std::abs(pulled[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] -
                                         ref[static_cast<std::size_t>(mu * n + nu)].value()));
    out.absorb(worst, x);
  }
  return out;
}

Embedding cone_slice_embedding(MetricPtr cone, int base_dim, double t0) {
  Embedding e;
  e.intrinsic_dim = base_dim;
  e.ambient = std::move(cone);
  e.orientation = 1;
  e.label = "t=" + std::to_string(t0) + " slice of " + e.ambient->label;
  e.domain = ChartDomain::box(Point(e.ambient->domain.lo.begin(), e.ambient->domain.lo.end() - 1),
                              Point(e.ambient->domain.hi.begin(), e.ambient->domain.hi.end() - 1));
  const int n = base_dim;
  e.map = [n, t0](std::span<const Jet> u) {
    JetVec x(u.begin(), u.end());
    x.push_back(Jet::constant_like(u[0], t0));
    return x;
  };
  return e;
}

Embedding join_slice_embedding(MetricPtr join, int dim1, int dim2, double theta0) {
  Embedding e;
  e.intrinsic_dim = dim1 + dim2;
  e.ambient = std::move(join);
  e.orientation = 1;
  e.label = "theta=" + std::to_string(theta0) + " slice of " + e.ambient->label;
  e.domain = ChartDomain::box(Point(e.ambient->domain.lo.begin(), e.ambient->domain.lo.end() - 1),
                              Point(e.ambient->domain.hi.begin(), e.ambient->domain.hi.end() - 1));
  e.map = [theta0](std::span<const Jet> u) {
    JetVec x(u.begin(), u.end());
    x.push_back(Jet::constant_like(u[0], theta0));
    return x;
  };
  return e;
}

}  // namespace umb
