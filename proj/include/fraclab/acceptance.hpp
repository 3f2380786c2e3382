#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/report.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

struct AcceptanceOptions {
  double d_gamma_scale = 1.0;  // != 1 injects a fault into every d_gamma
  std::uint64_t seed = 0;
  Execution exec = Execution::Parallel;
  bool mutation_check = true;  // criterion 9 reruns criteria 2-7 with d_gamma * 1.01
};

/// One numbered acceptance criterion. Runtime limits are checked here rather than in the
/// reports so that report JSON stays deterministic.
struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<VerificationReport> reports;
  double runtime_seconds = 0.0;
  double unit_runtime_seconds = 0.0;  // slowest timed unit (per gamma for criterion 1)
  double runtime_limit = 0.0;         // 0 = none; applies to unit_runtime_seconds
  bool pass = false;
};

/// Criteria 1-9; `only` restricts to the listed ids.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {},
                                            const std::vector<int>& only = {});

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// "criterion N: PASS|FAIL  title  (k/m reports, t s)"
std::string format_criterion_line(const CriterionResult& c);

std::vector<VerificationReport> flatten_reports(const std::vector<CriterionResult>& cs);

/// Fixed test fields.
SpectralField acceptance_field_c1(int size = 64);         // cos(x1) + cos(2 x2)
SpectralField random_field(int size, std::uint64_t seed);  // band-limited, |k| <= 4

}  // namespace fraclab
