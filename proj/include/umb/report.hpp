#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace umb {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// One verified identity: stable id, the statement checked, residual
/// statistics, and the verdict. `pass` holds exactly when max <= tolerance;
/// degenerate rows never count as passes.
struct ReportRow {
  std::string id;
  std::string anchor;   // human-readable statement of the identity
  std::string subject;  // embedding / form / candidate the row refers to
  double max = 0.0;
  double mean = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  bool pass = false;
  std::string status;  // pass | fail | degenerate | info
  std::string note;
};

struct VerificationReport {
  int schema_version = kReportSchemaVersion;
  std::string suite;
  std::string manifold;
  std::uint64_t seed = 1;
  int sample_count = 50;
  std::string version = kVersion;
  std::map<std::string, double> tolerance_overrides;
  std::vector<ReportRow> rows;
  std::string overall;  // pass | fail | degenerate

  /// 0 pass, 1 identity failure, 3 degenerate/unsupported.
  int exit_code() const {
    if (overall == "pass") return 0;
    if (overall == "fail") return 1;
    return 3;
  }

  void finalize() {
    bool any_fail = false, any_pass = false;
    for (const ReportRow& r : rows) {
      if (r.status == "fail") any_fail = true;
      if (r.status == "pass") any_pass = true;
    }
    overall = any_fail ? "fail" : (any_pass ? "pass" : "degenerate");
  }
};

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
std::string to_markdown(const VerificationReport& r);

}  // namespace umb
