#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "umb/chart.hpp"
#include "umb/jet.hpp"
#include "umb/jetlin.hpp"

namespace umb {

/// A field evaluator: receives coordinate jets of its chart and returns
/// component jets built from them by jet arithmetic. Evaluators must be pure;
/// they are called concurrently from sweep kernels.
using FieldFn = std::function<JetVec(std::span<const Jet>)>;

/// A Riemannian metric given by jet-evaluable symmetric components on a
/// single chart.
struct MetricField {
  int dim = 0;
  std::string label;
  ChartDomain domain;
  int orientation = 1;
  /// Extra jet orders consumed internally by the evaluator (pullback-style
  /// evaluators differentiate their input once). Generic operations lift
  /// coordinates at (needed order + overhead).
  int jet_order_overhead = 0;
  bool einstein = false;
  FieldFn components;  // dim*dim jets, row-major, symmetric
};

using MetricPtr = std::shared_ptr<const MetricField>;

/// Evaluate the metric matrix at lifted coordinates.
JetMat metric_jets(const MetricField& m, std::span<const Jet> coords);

/// Levi-Civita connection coefficients as jets: gamma[k][i][j] with layout
/// (k*n + i)*n + j, one order below the metric jets.
JetVec christoffel_jets(const JetMat& g, const JetMat& ginv);

/// Connection coefficients at a point (values only), layout (k*n+i)*n+j.
std::vector<double> christoffels(const MetricField& m, const Point& x);

/// Metric values and inverse at a point.
struct MetricAtPoint {
  std::vector<double> g;
  std::vector<double> ginv;
};
MetricAtPoint metric_values(const MetricField& m, const Point& x);

}  // namespace umb
