#include "fraclab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fraclab {

double relative_error(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-30);
}

VerificationReport make_report(std::string id, std::string anchor, double lhs, double rhs,
                               double tolerance) {
  return make_report_with_error(std::move(id), std::move(anchor), lhs, rhs,
                                relative_error(lhs, rhs), tolerance, "rel");
}

VerificationReport make_report_with_error(std::string id, std::string anchor, double lhs,
                                          double rhs, double error, double tolerance,
                                          std::string metric) {
  VerificationReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.lhs = lhs;
  r.rhs = rhs;
  r.error = error;
  r.tolerance = tolerance;
  r.metric = std::move(metric);
  r.pass = std::isfinite(error) && error <= tolerance;
  return r;
}

nlohmann::json to_json(const VerificationReport& r, bool include_runtime) {
  nlohmann::json j = {{"id", r.id},         {"anchor", r.anchor},       {"lhs", r.lhs},
                      {"rhs", r.rhs},       {"error", r.error},         {"tolerance", r.tolerance},
                      {"metric", r.metric}, {"pass", r.pass},           {"detail", r.detail}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

nlohmann::json to_json(const std::vector<VerificationReport>& rs, bool include_runtime) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rs) rows.push_back(to_json(r, include_runtime));
  const auto passed = std::count_if(rs.begin(), rs.end(), [](const auto& r) { return r.pass; });
  return {{"reports", rows}, {"passed", passed}, {"total", rs.size()}};
}

std::string format_table(const std::vector<VerificationReport>& rs) {
  std::size_t w = 8;
  for (const auto& r : rs) w = std::max(w, r.id.size());
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-4s  %12s  %10s  %s\n", static_cast<int>(w), "identity",
                "ok", "error", "tolerance", "anchor");
  os << buf;
  int passed = 0;
  for (const auto& r : rs) {
    passed += r.pass ? 1 : 0;
    std::snprintf(buf, sizeof buf, "%-*s  %-4s  %12.3e  %10.1e  ", static_cast<int>(w),
                  r.id.c_str(), r.pass ? "PASS" : "FAIL", r.error, r.tolerance);
    os << buf << r.anchor << "\n";
  }
  os << passed << "/" << rs.size() << " passed\n";
  return os.str();
}

bool all_pass(const std::vector<VerificationReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const auto& r) { return r.pass; });
}

}  // namespace fraclab
