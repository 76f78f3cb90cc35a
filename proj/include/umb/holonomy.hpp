#pragma once

#include <Eigen/Dense>
#include <functional>

#include "umb/curvature.hpp"
#include "umb/forms.hpp"
#include "umb/metric.hpp"
#include "umb/summary.hpp"
#include "umb/sweep.hpp"

namespace umb {

/// One smooth piece of a curve: s in [0,1] -> chart point, evaluated with
/// 1-dim jets so velocities come out of the same evaluator.
struct CurveSegment {
  std::function<JetVec(const Jet&)> map;
};

/// Piecewise-smooth closed loop through a base point.
struct LoopSpec {
  Point base_point;
  std::vector<CurveSegment> segments;
  int step_count = 512;  // RK4 steps per segment
};

/// Straight chart segment from a to b.
CurveSegment line_segment(const Point& a, const Point& b);

/// Tangent-frame parallel transport around the loop: columns are the
/// transported coordinate basis vectors. Classical RK4; the result is a
/// linear isometry up to O(step^-4).
Eigen::MatrixXd parallel_transport_matrix(const MetricField& m, const LoopSpec& loop);

/// Transport a single tangent vector along one segment chain (not
/// necessarily closed).
Eigen::VectorXd parallel_transport_vector(const MetricField& m,
                                          const std::vector<CurveSegment>& path,
                                          const Eigen::VectorXd& v0, int steps);

/// Transport a k-form component vector by integrating the induced connection
/// on Lambda^k directly (used by the subspace extension and as the
/// independent route against the exterior-power transport).
FormValue parallel_transport_form(const MetricField& m, const std::vector<CurveSegment>& path,
                                  int degree, const FormValue& w0, int steps);

/// Compound matrix: Lambda^k of a linear map on sorted combinations.
Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& a, int k);

/// Rank of span{ R(X^Y) } in so(n), optionally augmented by the slices of
/// nabla R. Singular values below 1e-6 x the largest (with an absolute floor
/// of 1e-9) count as zero.
int curvature_span_dimension(const MetricField& m, const Point& x,
                             bool include_first_derivative);

/// Rank of the span of the loop transports' deviations from the identity
/// (skew parts, in a g-orthonormal frame). A loop-based counterpart of the
/// curvature span; small loops recover the curvature directions.
int loop_holonomy_rank(const MetricField& m, const std::vector<LoopSpec>& loops);

/// Intersection of the near-fixed subspaces of the induced Lambda^k
/// transports over a family of loops with a common base point.
struct FixedFormSubspace {
  int degree = 0;
  int dimension = 0;
  Eigen::MatrixXd basis;  // C(n,k) x dimension, coordinate components at base
  std::vector<double> nabla_residuals;  // per basis column, via radial extension
  double tolerance_used = 0.0;
  int loop_count = 0;
};
FixedFormSubspace fixed_form_subspace(const MetricField& m, const std::vector<LoopSpec>& loops,
                                      int degree, Exec exec = Exec::Serial);

/// Coordinate-plane parallelograms at three scales plus eight seeded smooth
/// Fourier loops, all through `base`.
std::vector<LoopSpec> standard_loop_family(const MetricField& m, const Point& base,
                                           std::uint64_t seed);

}  // namespace umb
