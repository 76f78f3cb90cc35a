#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "umb/embedding.hpp"
#include "umb/forms.hpp"
#include "umb/metric.hpp"

namespace umb::zoo {

/// A named differential form carried by a catalogue entry, with the facts the
/// suites rely on.
struct NamedForm {
  std::string name;
  FormField field;
  bool expect_parallel = false;
  /// When nonzero, the form is a special Killing candidate of this ambient
  /// degree, built with the stated lambda normalization.
  int special_killing_k = 0;
  double killing_lambda = 0.0;
  /// For candidates pulled back from a constant ambient form: the flat model
  /// the cone lift must reproduce under (u, t) -> t x(u).
  std::shared_ptr<const FormField> cone_reference;
};

/// One validated catalogue entry: an explicit chart with its metric,
/// distinguished forms, expected scalars, and canonical umbilical
/// hypersurfaces. Construction runs the load-time checks; a spec that fails
/// them never escapes build().
struct ManifoldSpec {
  std::string name;  // canonical, e.g. "round_sphere(n=3,r=1)"
  std::string kind;
  std::map<std::string, double> params;
  MetricPtr metric;

  std::optional<double> known_scalar;
  std::optional<double> known_einstein_constant;
  std::optional<int> known_holonomy_dim;

  std::vector<NamedForm> forms;
  std::vector<Embedding> umbilical_embeddings;

  std::shared_ptr<ManifoldSpec> base1;  // for cone / product / sine_join
  std::shared_ptr<ManifoldSpec> base2;

  std::vector<Point> samples(std::size_t count, std::uint64_t seed) const {
    return sample_points(metric->domain, count, seed);
  }
};

using SpecPtr = std::shared_ptr<ManifoldSpec>;

/// Catalogue names accepted by build().
std::vector<std::string> names();

/// Build and validate an entry. Composite kinds (cone, product, sine_join)
/// take their bases as sub-specs.
SpecPtr build(const std::string& kind, const std::map<std::string, double>& params = {},
              std::vector<SpecPtr> bases = {});

/// Parse expressions like "round_sphere(n=3,r=1)" or
/// "cone(sasakian_sphere(n=3))" into a validated spec.
SpecPtr build_from_string(const std::string& expr);

/// Spec file loader (JSON text, schema in the docs): fields name, params,
/// orientation, sample_count, tolerance_overrides.
struct SpecFile {
  SpecPtr spec;
  int sample_count = 50;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance_overrides;
};
SpecFile load_spec_file(const std::string& path);

/// The canonical umbilical hypersurfaces of a spec (validated at build time).
/// Empty when the catalogue has none for this geometry.
const std::vector<Embedding>& canonical_umbilical_embeddings(const ManifoldSpec& spec);

/// Helpers shared with the tests: chart metrics and embeddings.
MetricPtr euclidean_metric(int n);
MetricPtr sphere_metric(int n, double r);
Embedding sphere_in_euclidean(int n, double r, MetricPtr ambient, int orientation = 1);
Embedding geodesic_sphere_in_sphere(int n, double rho, MetricPtr ambient);
Embedding flipped(const Embedding& e);

/// The constant 3-form encoding the octonion cross product on R^7 (fixed
/// sign table, validated by |x x y|^2 = |x|^2 |y|^2 - <x,y>^2 at build time).
FormField g2_three_form(MetricPtr euclidean7);

}  // namespace umb::zoo
