#pragma once

#include "umb/report.hpp"
#include "umb/search.hpp"
#include "umb/sweep.hpp"
#include "umb/zoo.hpp"

namespace umb {

struct SuiteOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance_overrides;  // by row id; "*" = all
  Exec exec = Exec::Parallel;
};

/// Metric sanity, curvature symmetries, Einstein checks, and the umbilical
/// hypersurface relations on the canonical embeddings.
VerificationReport fundamental_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt);

/// The special Killing identities for every (parallel ambient form, canonical
/// umbilical embedding) pair of the entry. Degenerate when the entry has no
/// umbilical embedding.
VerificationReport killing_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt);

/// Cone construction checks over the entry: slice umbilicity, flatness /
/// Ricci-flatness where expected, and the cone lift of the entry's special
/// Killing forms, matched against their flat-model counterparts when known.
VerificationReport cone_suite(const zoo::ManifoldSpec& spec, const SuiteOptions& opt);

/// All three suites concatenated.
VerificationReport all_suites(const zoo::ManifoldSpec& spec, const SuiteOptions& opt);

/// Holonomy estimation report: curvature-span algebra dimension, loop
/// transports, fixed k-form subspace with nabla residuals.
VerificationReport holonomy_report(const zoo::ManifoldSpec& spec, int degree,
                                   const SuiteOptions& opt);

/// Search configuration file (JSON): family, param_dim, budget, seed,
/// thresholds, sample settings.
struct SearchConfig {
  std::string family;
  int param_dim = 8;
  OptimizerConfig opt;
  bool exploratory = false;
};
SearchConfig load_search_config(const std::string& path);
SearchConfig search_config_from_json(const nlohmann::json& j);

nlohmann::json search_result_json(const SearchConfig& cfg, const SearchResult& result);
std::string search_result_markdown(const SearchConfig& cfg, const SearchResult& result);

}  // namespace umb
