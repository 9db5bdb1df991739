#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ncfourier/calibration.hpp"
#include "ncfourier/config.hpp"

namespace ncf {

/// Result of one check over its trials.
///   violations = #{trials : !(ratio <= cap (1 + slack))}; NaN counts as a violation.
/// Calibrated caps use slack 1e-10; exact caps already include their tolerance
/// and use slack 0. worst_seed is the trial seed that produced max_ratio.
struct CheckRecord {
  std::string check_name;
  std::string suite;
  std::string group;
  std::string direction;
  Params params;
  Json extra = Json::object();
  int trials = 0;
  double max_ratio = -std::numeric_limits<double>::infinity();
  double cap = 0;
  double slack = 0;
  std::string cap_source;
  int violations = 0;
  std::uint64_t worst_seed = 0;
  double elapsed = 0;
};

/// One unit of work: a trial function producing one ratio per output record.
struct PlannedCheck {
  std::vector<CheckRecord> outputs;
  int trials = 1;
  std::uint64_t seed_base = 0;
  /// Ratios for the trial with the given seed, one per output.
  std::function<std::vector<double>(std::uint64_t)> trial;
  /// When >= 0, runs once with the worst seed of output 0 of that earlier check.
  int depends_on = -1;
};

/// Trial seed t of a check: derive_seed(seed_base, {t}).
std::uint64_t trial_seed(const PlannedCheck& c, int t);

enum class RunMode { Verify, Certify };

/// Builds every check the config selects. Certify keeps only checks whose
/// constant is exact: Plancherel, inversion, L^{p,p} = L^p and the p = 2
/// endpoints. Throws ContractViolation when a needed cap is missing from the
/// calibration.
std::vector<PlannedCheck> plan_checks(const Config& cfg, const Calibration& cal, RunMode mode);

/// Runs the plan with cfg.workers threads. Records depend only on the seeds,
/// never on the worker count.
std::vector<CheckRecord> run_plan(std::vector<PlannedCheck>& plan, int workers);

int total_violations(const std::vector<CheckRecord>& records);

/// JSON report. Stable field order; elapsed times only when timing is set.
Json report_json(const std::string& command, const Config& cfg, const Calibration& cal,
                 const std::vector<CheckRecord>& records, bool timing);

}  // namespace ncf
