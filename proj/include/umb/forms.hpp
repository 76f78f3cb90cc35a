#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "umb/combi.hpp"
#include "umb/metric.hpp"

namespace umb {

/// A degree-k differential form with jet-evaluable antisymmetric components
/// on a chart. Components are stored on sorted index combinations; the
/// evaluation convention is sigma(e_{i1},...,e_{ik}) = sigma_{i1...ik} with
/// no 1/k! factor, and the wedge carries the full alternation sum so that
/// (dx^dy)(e_x, e_y) = 1.
struct FormField {
  int dim = 0;
  int degree = 0;
  MetricPtr metric;  // required for nabla, d*, Hodge; may be null otherwise
  int jet_order_overhead = 0;
  std::string label;
  FieldFn components;  // size C(dim, degree); degree 0 = scalar field
};

/// Component vector of a form value at one point.
using FormValue = std::vector<double>;

// ---- pointwise kernels on component vectors (scalar T = double or Jet) ----

template <class T>
std::vector<T> wedge_components(int n, int p, int q, std::span<const T> a,
                                std::span<const T> b);

template <class T>
std::vector<T> interior_components(int n, int k, std::span<const T> v,
                                   std::span<const T> f);

/// Inner product of two k-form component vectors under ginv (compound-matrix
/// contraction).
double form_inner(int n, int k, std::span<const double> a, std::span<const double> b,
                  const Eigen::MatrixXd& ginv);

/// Raise all k indices: Lambda^k(ginv) applied to the component vector.
FormValue raise_indices(int n, int k, std::span<const double> f, const Eigen::MatrixXd& ginv);

// ---- field-level operations ----

JetVec eval_form_jets(const FormField& f, std::span<const Jet> coords);
FormValue eval_form(const FormField& f, const Point& x);

/// Covariant derivative tensor in jet form, layout m*C + rank(I), one order
/// below the component jets:
/// (nabla sigma)_{m,I} = D_m sigma_I - sum_j Gamma^p_{m i_j} sigma_{..p..}.
JetVec nabla_form_jets(int n, int k, const JetVec& sigma, const JetVec& gamma);

/// Exterior derivative components from the component jets alone.
JetVec exterior_derivative_jets(int n, int k, const JetVec& sigma);

/// d, by the coordinate formula; metric-independent. A top-degree input
/// yields the empty-component (n+1)-form, labeled trivially zero.
FormField exterior_derivative(const FormField& f);

FormField wedge(const FormField& a, const FormField& b);

/// Full covariant derivative as a (slot, combo) tensor, layout m*C + I.
std::vector<double> nabla_form_tensor(const FormField& f, const Point& x);

/// (nabla_X sigma) for a fixed coordinate vector X.
FormValue covariant_derivative_form(const FormField& f, std::span<const double> X,
                                    const Point& x);

/// Codifferential d* = -sum_a e_a . nabla_{e_a} (orthonormal contraction),
/// as a value at a point and as a derived field.
FormValue codifferential(const FormField& f, const Point& x);
FormField codifferential_field(const FormField& f);

FormValue interior_product(std::span<const double> v, const FormField& f, const Point& x);

/// Hodge star at a point; orientation defaults to the metric's chart
/// orientation. Satisfies **sigma = (-1)^{k(n-k)} sigma.
FormValue hodge_star(const FormField& f, const Point& x,
                     std::optional<int> orientation = std::nullopt);

/// Constant-coefficient form on a flat chart (components independent of x).
FormField constant_form(int n, int degree, FormValue components, MetricPtr metric,
                        std::string label = "");

}  // namespace umb
