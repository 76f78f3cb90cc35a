#include "umb/report.hpp"

#include <sstream>

namespace umb {

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : r.rows) {
    rows.push_back({{"id", row.id},
                    {"anchor", row.anchor},
                    {"subject", row.subject},
                    {"max", row.max},
                    {"mean", row.mean},
                    {"samples", row.samples},
                    {"tolerance", row.tolerance},
                    {"pass", row.pass},
                    {"status", row.status},
                    {"note", row.note}});
  }
  return nlohmann::json{{"schema_version", r.schema_version},
                        {"suite", r.suite},
                        {"manifold", r.manifold},
                        {"environment",
                         {{"seed", r.seed},
                          {"samples", r.sample_count},
                          {"version", r.version},
                          {"tolerance_overrides", r.tolerance_overrides}}},
                        {"identities", rows},
                        {"overall", r.overall}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.suite = j.at("suite").get<std::string>();
  r.manifold = j.at("manifold").get<std::string>();
  const auto& env = j.at("environment");
  r.seed = env.at("seed").get<std::uint64_t>();
  r.sample_count = env.at("samples").get<int>();
  r.version = env.at("version").get<std::string>();
  if (env.contains("tolerance_overrides"))
    for (const auto& [key, value] : env.at("tolerance_overrides").items())
      r.tolerance_overrides[key] = value.get<double>();
  for (const auto& row : j.at("identities")) {
    ReportRow rr;
    rr.id = row.at("id").get<std::string>();
    rr.anchor = row.at("anchor").get<std::string>();
    rr.subject = row.at("subject").get<std::string>();
    rr.max = row.at("max").get<double>();
    rr.mean = row.at("mean").get<double>();
    rr.samples = row.at("samples").get<std::size_t>();
    rr.tolerance = row.at("tolerance").get<double>();
    rr.pass = row.at("pass").get<bool>();
    rr.status = row.at("status").get<std::string>();
    rr.note = row.at("note").get<std::string>();
    r.rows.push_back(std::move(rr));
  }
  r.overall = j.at("overall").get<std::string>();
  return r;
}

std::string to_markdown(const VerificationReport& r) {
  std::ostringstream os;
  os << "# " << r.suite << " suite: " << r.manifold << "\n\n";
  os << "seed " << r.seed << ", " << r.sample_count << " samples, version " << r.version
     << "\n\n";
  os << "| identity | subject | max | tolerance | status |\n";
  os << "|---|---|---|---|---|\n";
  os.precision(3);
  os << std::scientific;
  for (const ReportRow& row : r.rows) {
    os << "| " << row.anchor << " | " << row.subject << " | " << row.max << " | "
       << row.tolerance << " | " << row.status << " |\n";
  }
  os << "\noverall: **" << r.overall << "**\n";
  return os.str();
}

}  // namespace umb
