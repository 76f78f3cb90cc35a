#pragma once

#include <Eigen/Dense>
#include <vector>

#include "umb/metric.hpp"

namespace umb {

/// Riemann tensor and its contractions at a chart point.
///
/// Conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
/// and R(X,Y,Z,W) = g(R(X,Y)Z, W), so the unit round sphere has sectional
/// curvature +1 and the curvature operator defined by
/// g(R(X^Y), Z^W) = -R(X,Y,Z,W) is the identity on the unit sphere. Every
/// other module inherits this sign choice; test_riemann pins it.
struct CurvatureAtPoint {
  int dim = 0;
  Point point;
  std::vector<double> riemann;  // R_{ijkl}, layout ((i*n + j)*n + k)*n + l
  std::vector<double> ricci;    // n*n
  double scalar = 0.0;
  std::vector<double> g;      // metric values at the point
  std::vector<double> ginv;

  double rm(int i, int j, int k, int l) const {
    const int n = dim;
    return riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
  }
};

CurvatureAtPoint curvature(const MetricField& m, const Point& x);

/// Covariant derivative of the Riemann tensor, layout m*(n^4) + riemann index.
std::vector<double> riemann_covariant_derivative(const MetricField& m, const Point& x);

/// K(X,Y) = R(X,Y,Y,X) / (|X|^2 |Y|^2 - g(X,Y)^2).
double sectional_curvature(const CurvatureAtPoint& c, std::span<const double> X,
                           std::span<const double> Y);

/// The symmetric operator on 2-vectors, expressed in a g-orthonormal frame
/// on sorted index pairs. Identity on the unit sphere, zero on flat space.
Eigen::MatrixXd curvature_operator(const CurvatureAtPoint& c);

/// Ricci by direct contraction of the connection coefficients, bypassing the
/// assembled Riemann tensor. Independent route used for consistency checks.
std::vector<double> ricci_direct(const MetricField& m, const Point& x);

}  // namespace umb
