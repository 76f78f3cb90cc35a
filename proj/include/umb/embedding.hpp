#pragma once

#include <Eigen/Dense>

#include "umb/curvature.hpp"
#include "umb/forms.hpp"
#include "umb/metric.hpp"
#include "umb/summary.hpp"

namespace umb {

/// A hypersurface given by a jet-evaluable chart map into an ambient chart
/// one dimension up. `orientation` selects the unit normal branch.
struct Embedding {
  int intrinsic_dim = 0;
  MetricPtr ambient;
  FieldFn map;  // returns intrinsic_dim + 1 ambient coordinates
  int orientation = 1;
  int map_order_overhead = 0;  // jet orders the map evaluator consumes itself
  ChartDomain domain;
  std::string label;
};

/// Pointwise hypersurface data (values).
struct HypersurfacePointData {
  Eigen::MatrixXd induced_metric;
  Eigen::VectorXd normal;              // ambient components, unit, g-orthogonal
  Eigen::MatrixXd second_fundamental;  // scalar coefficients of II against N
  double mean_curvature = 0.0;         // trace(A)/n; equals lambda
  double lambda_estimate = 0.0;
  double shape_duality_residual = 0.0;  // |II - dual route via nabla N|, max norm
};

/// Everything about the hypersurface at one point, jet-graded over the
/// intrinsic chart. `order` is the order of the map jets; derived quantities
/// sit correspondingly lower (II and lambda at order-2).
struct HyperFrame {
  int n = 0;  // intrinsic dimension
  JetVec x;   // ambient coordinates as chart jets
  JetMat tangents;       // rows a < n, cols alpha <= n: D_a x^alpha
  JetMat ambient_g;      // ambient metric composed along the map
  JetMat ambient_ginv;
  JetVec ambient_gamma;  // ambient connection composed, layout (c*(n+1)+a)*(n+1)+b
  JetVec normal;         // n+1 components
  JetMat induced_g;
  JetMat induced_ginv;
  JetVec second_fundamental;  // n*n jets
  Jet lambda;
};

HyperFrame hyper_frame(const Embedding& e, const Point& u, int order);

/// Map and unit-normal jets from already-lifted intrinsic jets; the pieces of
/// hyper_frame that closures (pullbacks, normal-graph families) need inline.
struct MapWithNormal {
  JetVec x;         // n+1 ambient coordinates
  JetVec normal;    // n+1 components, one order below x
  JetMat tangents;  // rows a, cols alpha
};
MapWithNormal map_with_normal(const Embedding& e, std::span<const Jet> ujets);

/// Pull an antisymmetric ambient component vector back through the Jacobian:
/// beta_I = sum_J sigma_J det(tangents[I rows, J cols]).
JetVec pullback_components(int n, int k, const JetVec& sigma_at_x, const JetMat& tangents);

Eigen::MatrixXd first_fundamental_form(const Embedding& e, const Point& u);

HypersurfacePointData second_fundamental_form(const Embedding& e, const Point& u);

/// Frobenius norm (in the induced metric) of the traceless part of II.
double umbilicity_residual(const Embedding& e, const Point& u);

/// Tolerance below which a point counts as umbilical for the curvature
/// relations; they refuse louder inputs.
inline constexpr double kUmbilicGate = 1e-7;

/// Residual of the umbilical curvature relation
/// Rbar(X,Y,Z,W) = R(X,Y,Z,W) + lambda^2 (g(X,Z)g(Y,W) - g(X,W)g(Y,Z))
/// over all coordinate quadruples. Throws PreconditionError off umbilical
/// points.
ResidualSummary gauss_residual(const Embedding& e, const Point& u);

struct CodazziResult {
  ResidualSummary full;    // Rbar(X,Y,Z,N) - (dlambda ^ Z)(X,Y)
  ResidualSummary traced;  // Ricbar(X,N) - (n-1) dlambda(X)
};
CodazziResult codazzi_residual(const Embedding& e, const Point& u);

/// lambda^2 = scal_g/(n(n-1)) - scal_gbar/(n(n+1)) on umbilical hypersurfaces
/// of Einstein ambients, plus constancy of lambda and scal_g across samples
/// and the inequality (n+1) scal_g >= (n-1) scal_gbar.
struct EinsteinLambdaResult {
  ResidualSummary formula;
  double lambda_spread = 0.0;
  double scalar_spread = 0.0;
  bool inequality_holds = true;
  double lambda_mean = 0.0;
};
EinsteinLambdaResult einstein_lambda_check(const Embedding& e,
                                           const std::vector<Point>& samples);

/// Pull-back pair of an ambient k-form along the hypersurface:
/// gamma = i*(N . sigma), beta = i*sigma, and the residual of the
/// decomposition sigma = N^gamma + beta evaluated on the adapted frame.
struct PullbackPair {
  FormValue gamma;  // degree k-1 components on the intrinsic chart
  FormValue beta;   // degree k
  double decomposition_residual = 0.0;
  bool gamma_vanishes = false;  // N in the kernel of sigma at this point
};
PullbackPair pullback_forms(const Embedding& e, const FormField& sigma, const Point& u);

/// i*sigma as a jet-evaluable field on the intrinsic chart.
FormField pullback_field(const Embedding& e, const FormField& sigma, MetricPtr induced);

/// i*(N . sigma) as a jet-evaluable field on the intrinsic chart.
FormField normal_contraction_pullback_field(const Embedding& e, const FormField& sigma,
                                            MetricPtr induced);

/// The induced metric as a first-class metric field (one jet order of
/// overhead: the evaluator differentiates the map).
MetricPtr induced_metric_field(const Embedding& e);

/// Residuals of the two frame equations
/// nablabar_X Y = nabla_X Y + lambda g(X,Y) N  and  nablabar_X N = -lambda X
/// at an umbilical point (max over coordinate directions).
struct FrameEquationResult {
  double tangent_residual = 0.0;
  double normal_residual = 0.0;
};
FrameEquationResult frame_equation_residual(const Embedding& e, const Point& u);

}  // namespace umb
