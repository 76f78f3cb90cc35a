#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "umb/embedding.hpp"
#include "umb/sweep.hpp"

namespace umb {

/// A normal-graph family of hypersurfaces around a base embedding:
/// x_theta(u) = x(u) + f_theta(u) N(u), f_theta = sum_i theta_i basis_i(u).
/// Tangential reparametrizations are excluded; they are pure gauge.
struct HypersurfaceFamily {
  Embedding base;
  std::vector<ScalarFieldFn> perturbation_basis;
  double trust_radius = 0.5;
  std::string label;

  int param_dim() const { return static_cast<int>(perturbation_basis.size()); }

  /// The family member at parameters theta. Its map evaluator spends one jet
  /// order on the base normal, so curvature-level operations top out at the
  /// umbilicity residual (which is all the objective needs).
  Embedding member(std::span<const double> theta) const;
};

/// Umbilicity objective over a fixed sample set: mean squared umbilicity
/// residual plus the sample variance of lambda. Immersion failures at any
/// sample return a penalized sentinel instead of throwing.
struct ObjectiveParts {
  double value = 0.0;
  double mean_sq_umbilicity = 0.0;
  double lambda_variance = 0.0;
  bool immersion_ok = true;
};
ObjectiveParts objective(const HypersurfaceFamily& family, std::span<const double> theta,
                         const std::vector<Point>& samples, Exec exec = Exec::Serial);

inline constexpr double kImmersionPenalty = 1e6;
inline constexpr double kImmersionFloor = 1e-3;  // smallest singular value gate

struct OptimizerConfig {
  int budget = 2000;
  std::uint64_t seed = 0;
  double converge_threshold = 1e-6;
  double start_radius = 0.2;
  double simplex_step = 0.1;
  int sample_count = 40;
  std::uint64_t sample_seed = 1;
};

struct SearchResult {
  std::vector<double> best_params;
  double best_objective = 0.0;
  int evaluations = 0;
  std::vector<double> trace;  // best objective after each iteration
  std::string verdict;        // converged_to_umbilical | stalled_above_floor |
                              // immersion_failure
  bool budget_exhausted = false;
};

/// Nelder-Mead simplex descent with the classical coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5), deterministic
/// for a given seed.
SearchResult optimize(const HypersurfaceFamily& family, const OptimizerConfig& config,
                      Exec exec = Exec::Serial);

/// Built-in families: "perturbed_s3_in_r4", "perturbed_equator_s4",
/// "cp2_probe".
HypersurfaceFamily make_family(const std::string& name, int param_dim);
std::vector<std::string> family_names();

}  // namespace umb
