// ydecay: solve, sweep and verify the radial soliton profile equation.
//
// Exit codes: 0 success, 1 invalid input, 2 not converged (or a failed check
// in verify), 3 positivity loss.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ydecay/asymptotics.hpp"
#include "ydecay/log.hpp"
#include "ydecay/record.hpp"
#include "ydecay/solver.hpp"
#include "ydecay/sweep.hpp"
#include "ydecay/verify.hpp"

namespace {

using namespace ydecay;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNotConverged = 2;
constexpr int kPositivityLoss = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceFlags {
  std::optional<int> n;
  std::optional<double> m, beta, rho, eta;
  IntegrateOptions io;
  std::string config;
  CLI::App* sub = nullptr;
};

void add_instance_flags(CLI::App* sub, InstanceFlags& f) {
  f.sub = sub;
  sub->add_option("--n", f.n, "dimension (integer >= 3)");
  sub->add_option("--m", f.m, "diffusion exponent, 0 < m < (n-2)/n");
  sub->add_option("--beta", f.beta, "similarity rate beta");
  sub->add_option("--rho", f.rho, "soliton constant rho > 0");
  sub->add_option("--eta", f.eta, "v(0) > 0");
  sub->add_option("--rmax", f.io.r_max, "outer radius")->capture_default_str();
  sub->add_option("--tol", f.io.tol, "integration tolerance (relative error of v)")
      ->capture_default_str();
  sub->add_option("--r0", f.io.r0, "launch radius of the origin expansion")
      ->capture_default_str();
  sub->add_flag("--allow-any-regime", f.io.allow_any_regime,
                "integrate even when the decay theorem does not apply");
  sub->add_option("--config", f.config, "key=value file; command-line flags take precedence");
}

// Fills options not given on the command line from a flat key=value file.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path);
  std::string line;
  std::size_t no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ":" + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw InputError(path + ":" + std::to_string(no) + ": nested config");
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InputError(path + ":" + std::to_string(no) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    try {
      if (opt->get_type_size() == 0) {
        if (value == "true" || value == "1") opt->add_result("true");
        else if (value != "false" && value != "0")
          throw InputError(path + ":" + std::to_string(no) + ": " + key + " expects true/false");
        else
          continue;
      } else {
        opt->add_result(value);
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InputError(path + ":" + std::to_string(no) + ": " + key + ": " + e.what());
    }
  }
}

ProblemParams make_params(InstanceFlags& f) {
  apply_config(f.sub, f.config);
  auto need = [](const auto& v, const char* name) {
    if (!v) throw InputError(std::string("missing required --") + name);
    return *v;
  };
  return ProblemParams(need(f.n, "n"), need(f.m, "m"), need(f.beta, "beta"), need(f.rho, "rho"),
                       need(f.eta, "eta"));
}

// Rejects out-of-regime parameters unless --allow-any-regime is set.
void require_regime(const ProblemParams& p, const IntegrateOptions& io) {
  const RegimeTag tag = classify(p);
  if (tag.advisory) log::info(*tag.advisory);
  if (!tag.theorem_applies) {
    if (!io.allow_any_regime) throw std::invalid_argument(tag.reason);
    log::info("decay theorem does not apply: ", tag.reason);
  }
}

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutStream(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw InputError("cannot open output file " + path);
    os = &file;
  }
  std::ostream& operator*() { return *os; }
};

int cmd_solve(InstanceFlags& f, const std::string& out, const std::string& format) {
  const ProblemParams p = make_params(f);
  require_regime(p, f.io);
  const auto t0 = std::chrono::steady_clock::now();
  const SolutionCurve c = integrate(p, f.io);
  log::info("integrated to r=", c.r_end(), " in ", c.nodes().size() - 1, " steps (",
            c.rejected_steps(), " rejected), status ", to_string(c.status()));

  std::optional<DecayEstimate> d;
  std::optional<double> winf;
  if (c.status() == SolveStatus::ok) {
    d = decay_estimate(c);
    try {
      winf = w_infinity(p);
    } catch (const std::domain_error& e) {
      log::info("w_infinity undefined: ", e.what());
    }
  }
  log::debug("solve took ",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");

  int code = kOk;
  std::string status = to_string(c.status());
  if (c.status() == SolveStatus::positivity_loss) {
    code = kPositivityLoss;
  } else if (c.status() == SolveStatus::step_size_underflow || !d->converged) {
    code = kNotConverged;
    if (c.status() == SolveStatus::ok) status = "not_converged";
  }

  OutStream os(out);
  const double m = p.m();
  auto w_of = [m](const CurveNode& nd) { return nd.r * nd.r * std::pow(nd.V, (1.0 - m) / m); };
  auto slope_of = [m](const CurveNode& nd) { return nd.r * nd.P / (m * nd.V); };
  if (format == "json") {
    nlohmann::json j;
    nlohmann::json& s = j["summary"];
    s["status"] = status;
    s["r_end"] = c.r_end();
    s["steps"] = c.nodes().size() - 1;
    s["w_limit"] = d ? nlohmann::json(d->w_limit) : nlohmann::json();
    s["w_residual"] = d ? nlohmann::json(d->w_residual) : nlohmann::json();
    s["w_infinity"] = winf ? nlohmann::json(*winf) : nlohmann::json();
    s["deviation"] =
        d && winf ? nlohmann::json(std::abs(d->w_limit - *winf) / *winf) : nlohmann::json();
    s["logslope_limit"] = d ? nlohmann::json(d->logslope_limit) : nlohmann::json();
    s["logslope_target"] = -2.0 / (1.0 - m);
    s["converged"] = d ? d->converged : false;
    nlohmann::json& rows = j["curve"] = nlohmann::json::array();
    for (const CurveNode& nd : c.nodes())
      rows.push_back({{"r", nd.r},
                      {"v", std::pow(nd.V, 1.0 / m)},
                      {"vm_prime", nd.P},
                      {"w", w_of(nd)},
                      {"logslope", slope_of(nd)}});
    *os << j.dump() << '\n';
  } else {
    auto opt = [](std::optional<double> x) { return x ? format_double(*x) : std::string("nan"); };
    *os << "# status " << status << "\r\n";
    *os << "# r_end " << format_double(c.r_end()) << "\r\n";
    *os << "# w_limit " << opt(d ? std::optional(d->w_limit) : std::nullopt) << "\r\n";
    *os << "# w_infinity " << opt(winf) << "\r\n";
    *os << "# deviation "
        << opt(d && winf ? std::optional(std::abs(d->w_limit - *winf) / *winf) : std::nullopt)
        << "\r\n";
    *os << "# logslope_limit " << opt(d ? std::optional(d->logslope_limit) : std::nullopt)
        << "\r\n";
    *os << "r,v,vm_prime,w,logslope\r\n";
    for (const CurveNode& nd : c.nodes())
      *os << format_double(nd.r) << ',' << format_double(std::pow(nd.V, 1.0 / m)) << ','
          << format_double(nd.P) << ',' << format_double(w_of(nd)) << ','
          << format_double(slope_of(nd)) << "\r\n";
  }
  return code;
}

int cmd_sweep(const std::string& grid_path, const std::string& out, const std::string& format,
              int jobs, bool timing) {
  std::ifstream in(grid_path);
  if (!in) throw InputError("cannot read grid file " + grid_path);
  GridSpec g;
  try {
    g = parse_grid(in);
  } catch (const std::runtime_error& e) {
    throw InputError(grid_path + ": " + e.what());
  }
  const std::vector<GridCell> cells = expand_grid(g);
  SweepOptions so;
  so.integrate = g.integrate;
  so.timing = timing;
  log::info("sweeping ", cells.size(), " cells on ", jobs, " thread(s)");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SweepRecord> recs =
      jobs <= 1 ? run_sweep_serial(cells, so) : run_sweep_parallel(cells, so, jobs);
  log::info("sweep done in ",
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");
  OutStream os(out);
  if (format == "csv")
    write_csv(*os, recs);
  else
    write_jsonl(*os, recs);
  return kOk;
}

int cmd_verify(InstanceFlags& f, const VerifyOptions& base) {
  const ProblemParams p = make_params(f);
  VerifyOptions vo = base;
  vo.integrate = f.io;
  const VerifyReport rep = verify_instance(p, vo);
  print_report(std::cout, rep);
  if (rep.all_pass) return kOk;
  if (rep.rows.front().verdict == Verdict::fail) return kInvalid;
  if (rep.status == SolveStatus::positivity_loss) return kPositivityLoss;
  return kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial soliton profiles of the fast diffusion equation: decay-rate verification"};
  app.require_subcommand(1);

  InstanceFlags solve_flags;
  std::string solve_out, solve_format = "csv";
  CLI::App* solve = app.add_subcommand("solve", "integrate one instance and write the curve");
  add_instance_flags(solve, solve_flags);
  solve->add_option("--out", solve_out, "output file (default stdout)");
  solve->add_option("--format", solve_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::string grid, sweep_out, sweep_format = "jsonl";
  int jobs = 1;
  bool timing = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("--grid", grid, "grid file: key = v1, v2, ... per line")->required();
  sweep->add_option("--out", sweep_out, "output file (default stdout)");
  sweep->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--format", sweep_format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  sweep->add_flag("--timing", timing, "record per-cell runtime (output no longer reproducible)");

  InstanceFlags verify_flags;
  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "run every applicable check on one instance");
  add_instance_flags(verify, verify_flags);
  verify->add_option("--strict", vo.strict, "multiplier on every check threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--seed", vo.seed, "seed for residual spot checks")->capture_default_str();
  verify->add_option("--spot-checks", vo.spot_checks, "number of residual spot checks")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*solve) return cmd_solve(solve_flags, solve_out, solve_format);
    if (*sweep) return cmd_sweep(grid, sweep_out, sweep_format, jobs, timing);
    if (*verify) return cmd_verify(verify_flags, vo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
