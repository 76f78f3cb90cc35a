#pragma once

#include "umb/embedding.hpp"
#include "umb/forms.hpp"
#include "umb/sweep.hpp"

namespace umb {

/// The pull-back pair (gamma, beta) of an ambient parallel k-form along a
/// totally umbilical hypersurface, packaged for the residual checks:
/// gamma = i*(N . sigma) has degree k-1, beta = i*sigma has degree k.
struct KillingCandidate {
  FormField gamma;
  FormField beta;
  int k = 0;
  double lambda = 0.0;
  MetricPtr metric;
  bool degenerate = false;  // gamma or beta vanishes along the samples
  std::string label;
  /// When the candidate came from candidate_from_parallel_form, the residual
  /// sweeps evaluate the pull-back pair in one fused pass per point instead
  /// of going through the generic field closures.
  std::shared_ptr<const Embedding> source_embedding;
  std::shared_ptr<const FormField> source_sigma;
};

/// Build a candidate from an ambient form and an umbilical embedding.
/// Validates umbilicity and constancy of lambda over the samples; detects the
/// degenerate branches (N in the kernel of sigma, or trivial tangential
/// restriction).
KillingCandidate candidate_from_parallel_form(const Embedding& e, const FormField& sigma,
                                              const std::vector<Point>& samples,
                                              MetricPtr intrinsic_metric = nullptr);

/// Residuals of the four derivative identities plus the closed/coclosed
/// facts:
///   (i)   nabla_X gamma - (1/k) X . d gamma
///   (ii)  nabla_X (d gamma) + k lambda^2 X ^ gamma
///   (iii) nabla_X beta + (1/(n-k+1)) X ^ d* beta
///   (iv)  nabla_X (d* beta) - (n-k+1) lambda^2 X . beta
/// The wedge factors use the metric dual of the coordinate direction.
/// Identities that are trivial for the given degree (no components on the
/// chart) report zero residual with a note.
struct KillingResiduals {
  ResidualSummary grad_gamma;        // (i)
  ResidualSummary grad_dgamma;       // (ii)
  ResidualSummary grad_beta;         // (iii)
  ResidualSummary grad_dstar_beta;   // (iv)
  ResidualSummary beta_closed;       // d beta = 0
  ResidualSummary gamma_coclosed;    // d* gamma = 0
  bool degenerate = false;
};
KillingResiduals special_killing_residuals(const KillingCandidate& c,
                                           const std::vector<Point>& samples,
                                           Exec exec = Exec::Serial);

/// Residuals of d gamma = -k lambda beta and d* beta = -(n-k+1) lambda gamma.
struct RelationResiduals {
  ResidualSummary dgamma_relation;
  ResidualSummary dstar_beta_relation;
  bool degenerate = false;
};
RelationResiduals relation_check(const KillingCandidate& c, const std::vector<Point>& samples,
                                 Exec exec = Exec::Serial);

/// True when gamma is genuinely non-parallel: max |nabla gamma| over samples
/// above the 1e-6 floor, with the witness point. Refuses degenerate gamma.
struct NonParallelResult {
  bool non_parallel = false;
  double max_gradient = 0.0;
  Point witness;
};
NonParallelResult non_parallel_check(const KillingCandidate& c,
                                     const std::vector<Point>& samples);

/// Lift of a special Killing (k-1)-form to a degree-k form on the cone chart
/// (base coordinates first, the radial coordinate t last):
///   psi~ = t^{k-1} dt ^ psi + (1/k) t^k d psi.
/// Assumes the lambda^2 = 1 normalization; `lambda` selects the sign the
/// candidate was built with, and a lambda = +1 candidate is flipped
/// (gamma -> -gamma) so the lift matches the ambient form it came from.
FormField cone_lift(const FormField& psi, int k, MetricPtr cone_metric, double lambda = -1.0);

/// Normalize a candidate with lambda^2 != 1 for the cone lift: scale the
/// intrinsic metric by lambda^2 (which rescales lambda to sign(lambda))
/// and keep the forms. Identities are invariant under this scaling.
struct ConeNormalized {
  FormField psi;          // gamma, unchanged components
  double lambda = -1.0;   // +-1 after normalization
  MetricPtr scaled_metric;
  double metric_scale = 1.0;  // factor applied to the metric components
};
ConeNormalized normalized_for_cone(const KillingCandidate& c);

/// max |nabla psi~| over cone samples; the executable content of the lift.
ResidualSummary cone_lift_parallel_residual(const FormField& lifted,
                                            const std::vector<Point>& cone_samples,
                                            Exec exec = Exec::Serial);

}  // namespace umb
