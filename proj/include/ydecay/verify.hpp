#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ydecay/solver.hpp"

namespace ydecay {

enum class Verdict { pass, fail, not_applicable, skipped };

const char* to_string(Verdict v);

struct CheckRow {
  std::string key;
  std::string claim;
  Verdict verdict = Verdict::skipped;
  std::string detail;
};

struct VerifyOptions {
  IntegrateOptions integrate;
  /// Multiplies every threshold below (values < 1 tighten).
  double strict = 1.0;
  std::uint64_t seed = 0;
  std::size_t spot_checks = 16;
};

/// Thresholds before the strict multiplier.
struct VerifyThresholds {
  static constexpr double decay_rel = 1e-2;
  static constexpr double log_slope_rel = 1e-2;
  static constexpr double residual = 1e-6;
  static constexpr double curvature_rel = 1e-2;
  static constexpr double k0_abs = 1e-3;
  static constexpr double k0_radius = 1e5;
  /// Barrier slack: max(bound_slack, 10 tol), since the barriers are sharp at alpha = n beta.
  static constexpr double bound_slack = 1e-12;
};

struct VerifyReport {
  std::vector<CheckRow> rows;
  SolveStatus status = SolveStatus::ok;
  bool integrated = false;
  bool all_pass = false;
};

/// Runs every applicable check on one instance. Never throws for regime failures;
/// those appear as a failed "regime" row.
VerifyReport verify_instance(const ProblemParams& p, const VerifyOptions& opts);

void print_report(std::ostream& os, const VerifyReport& rep);

}  // namespace ydecay
