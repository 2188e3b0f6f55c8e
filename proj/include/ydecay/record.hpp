#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ydecay {

/// Verification verdict of one parameter set, one line of sweep output.
struct SweepRecord {
  std::size_t index = 0;
  int n = 0;
  double m = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  std::optional<double> alpha;

  bool theorem_applies = false;
  std::string reason;
  std::string alpha_vs_nbeta;
  bool yamabe_case = false;
  bool explicit_case = false;

  /// ok | not_converged | positivity_loss | step_size_underflow | skipped | invalid
  std::string status;
  std::optional<double> w_infinity;
  std::optional<double> w_limit;
  std::optional<double> w_deviation;
  std::optional<double> logslope_limit;
  std::optional<double> logslope_deviation;
  std::optional<double> max_ode_residual;
  std::optional<double> max_integral_residual;
  /// pass | fail | n/a
  std::string lower_bound = "n/a";
  std::string upper_bound = "n/a";
  std::optional<double> r_limit;
  std::optional<double> k0_limit;
  std::optional<double> k1_limit;
  std::optional<double> runtime_s;
  std::size_t steps = 0;
  std::optional<double> last_r;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

void to_json(nlohmann::json& j, const SweepRecord& r);
void from_json(const nlohmann::json& j, SweepRecord& r);

/// One compact JSON object per line.
void write_jsonl(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_jsonl(std::istream& is);

/// Fixed column order; see csv_header().
const std::vector<std::string>& csv_header();
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_csv(std::istream& is);

/// Shortest-exact formatting with 17 significant digits, '.' decimal point.
std::string format_double(double x);

/// RFC-4180 quoting when the field contains a comma, quote or newline.
std::string csv_escape(const std::string& field);
/// Splits one CSV record (no embedded newlines).
std::vector<std::string> csv_split(const std::string& line);

}  // namespace ydecay
