#pragma once

#include "umb/embedding.hpp"
#include "umb/metric.hpp"
#include "umb/summary.hpp"

namespace umb {

/// Cone over a base metric: coordinates (u, t) with t last, metric
/// t^2 g + dt^2 on base x radial_range. The apex stays excluded; ranges must
/// sit inside (0, inf).
MetricPtr cone_metric(MetricPtr base, double t_lo = 0.5, double t_hi = 2.0);

/// sin^2(theta) g1 + cos^2(theta) g2 + dtheta^2 on (u1, u2, theta) with the
/// theta interval strictly inside (0, pi/2). Dimensions of both factors must
/// be >= 1.
MetricPtr sine_cone_join(MetricPtr g1, MetricPtr g2);

/// Componentwise residual of the product-of-cones identity: the product
/// metric of the two cones, pulled back through
/// (u1, u2, theta, r) -> (u1, u2, t = r sin theta, s = r cos theta),
/// against the cone over the join.
ResidualSummary product_cone_isometry_residual(MetricPtr g1, MetricPtr g2,
                                               const std::vector<Point>& samples);

/// t = t0 slice of a cone, as a hypersurface of the cone chart.
Embedding cone_slice_embedding(MetricPtr cone, int base_dim, double t0);

/// theta = theta0 slice of a sine-cone join.
Embedding join_slice_embedding(MetricPtr join, int dim1, int dim2, double theta0);

}  // namespace umb
