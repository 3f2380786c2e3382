#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace fraclab {

/// One verified identity: what was compared, how far apart the two sides were, and whether
/// that is within tolerance. `error` is relative unless `metric` says otherwise; `pass` is
/// always error <= tolerance.
struct VerificationReport {
  std::string id;      // stable identity key, e.g. "extension.order1.semi-analytic"
  std::string anchor;  // the identity in words
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  std::string metric = "rel";
  bool pass = false;
  double runtime_seconds = 0.0;
  std::string detail;
};

/// |lhs - rhs| / max(|rhs|, 1e-30)
double relative_error(double lhs, double rhs);

VerificationReport make_report(std::string id, std::string anchor, double lhs, double rhs,
                               double tolerance);
/// Report with an externally measured error (sup-norms, residuals, exact counts).
VerificationReport make_report_with_error(std::string id, std::string anchor, double lhs,
                                          double rhs, double error, double tolerance,
                                          std::string metric);

/// JSON without runtime unless asked; runtime would make artifacts nondeterministic.
nlohmann::json to_json(const VerificationReport& r, bool include_runtime = false);
nlohmann::json to_json(const std::vector<VerificationReport>& rs, bool include_runtime = false);

/// Fixed-width text table, one row per report, with a final pass count line.
std::string format_table(const std::vector<VerificationReport>& rs);

bool all_pass(const std::vector<VerificationReport>& rs);

}  // namespace fraclab
