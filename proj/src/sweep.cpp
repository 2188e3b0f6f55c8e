#include "ydecay/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ydecay/asymptotics.hpp"
#include "ydecay/geometry.hpp"

namespace ydecay {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text, std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw std::runtime_error("grid line " + std::to_string(line_no) + ": bad number '" + item +
                               "'");
    out.push_back(x);
  }
  if (out.empty()) throw std::runtime_error("grid line " + std::to_string(line_no) + ": empty list");
  return out;
}

}  // namespace

GridSpec parse_grid(std::istream& is) {
  GridSpec g;
  std::map<std::string, std::vector<double>> lists;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("grid line " + std::to_string(line_no) + ": expected key = values");
    const std::string key = trim(line.substr(0, eq));
    static const char* known[] = {"n", "m", "beta", "rho", "eta", "r_max", "tol", "r0"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known))
      throw std::runtime_error("grid line " + std::to_string(line_no) + ": unknown key '" + key +
                               "'");
    lists[key] = parse_list(line.substr(eq + 1), line_no);
  }
  for (const char* k : {"n", "m", "beta", "rho", "eta"})
    if (!lists.count(k)) throw std::runtime_error(std::string("grid: missing key '") + k + "'");
  for (double x : lists["n"]) {
    if (x != std::floor(x)) throw std::runtime_error("grid: n must be an integer");
    g.n.push_back(static_cast<int>(x));
  }
  g.m = lists["m"];
  g.beta = lists["beta"];
  g.rho = lists["rho"];
  g.eta = lists["eta"];
  auto scalar = [&](const char* k, double& dst) {
    if (!lists.count(k)) return;
    if (lists[k].size() != 1) throw std::runtime_error(std::string("grid: ") + k + " takes one value");
    dst = lists[k].front();
  };
  scalar("r_max", g.integrate.r_max);
  scalar("tol", g.integrate.tol);
  scalar("r0", g.integrate.r0);
  return g;
}

std::vector<GridCell> expand_grid(const GridSpec& g) {
  std::vector<GridCell> cells;
  std::size_t idx = 0;
  for (int n : g.n)
    for (double m : g.m)
      for (double beta : g.beta)
        for (double rho : g.rho)
          for (double eta : g.eta) cells.push_back({idx++, n, m, beta, rho, eta});
  return cells;
}

std::pair<double, double> max_residuals(const SolutionCurve& c, double lo, double hi,
                                        std::size_t points) {
  hi = std::min(hi, c.r_end());
  double ode = 0.0;
  double ident = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
    const double r = lo * std::pow(hi / lo, t);
    ode = std::max(ode, std::abs(ode_residual(c, r)));
    ident = std::max(ident, std::abs(integral_identity_residual(c, r)));
  }
  return {ode, ident};
}

SweepRecord run_cell(const GridCell& cell, const SweepOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.index = cell.index;
  rec.n = cell.n;
  rec.m = cell.m;
  rec.beta = cell.beta;
  rec.rho = cell.rho;
  rec.eta = cell.eta;
  try {
    const ProblemParams p(cell.n, cell.m, cell.beta, cell.rho, cell.eta);
    rec.alpha = p.alpha();
    const RegimeTag tag = classify(p);
    rec.theorem_applies = tag.theorem_applies;
    rec.reason = tag.reason;
    rec.alpha_vs_nbeta = to_string(tag.alpha_vs_nbeta);
    rec.yamabe_case = tag.yamabe_case;
    rec.explicit_case = tag.explicit_case;
    if (!tag.theorem_applies) {
      rec.status = "skipped";
    } else {
      const SolutionCurve curve = integrate(p, opts.integrate);
      rec.steps = curve.nodes().size() - 1;
      rec.last_r = curve.r_end();
      if (curve.status() != SolveStatus::ok) {
        rec.status = to_string(curve.status());
      } else {
        const double winf = w_infinity(p);
        const double slope = -2.0 / (1.0 - p.m());
        const DecayEstimate d = decay_estimate(curve);
        rec.w_infinity = winf;
        rec.w_limit = d.w_limit;
        rec.w_deviation = std::abs(d.w_limit - winf) / winf;
        rec.logslope_limit = d.logslope_limit;
        rec.logslope_deviation = std::abs(d.logslope_limit - slope) / std::abs(slope);
        const auto [ode, ident] = max_residuals(curve, 1.0, 1e4);
        rec.max_ode_residual = ode;
        rec.max_integral_residual = ident;
        const BoundReport b =
            bound_check(curve, std::max(opts.bound_slack, 10.0 * opts.integrate.tol));
        rec.lower_bound = b.lower.applies ? (b.lower.holds ? "pass" : "fail") : "n/a";
        rec.upper_bound = b.upper.applies ? (b.upper.holds ? "pass" : "fail") : "n/a";
        if (tag.yamabe_case) {
          const CurvatureLimits cl = curvature_limits(curve);
          rec.r_limit = cl.R_limit;
          rec.k0_limit = cl.K0_limit;
          rec.k1_limit = cl.K1_limit;
        }
        rec.status = d.converged ? "ok" : "not_converged";
      }
    }
  } catch (const std::invalid_argument& e) {
    rec.status = "invalid";
    rec.reason = e.what();
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.reason = e.what();
  }
  if (opts.timing)
    rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<SweepRecord> run_sweep_serial(std::span<const GridCell> cells,
                                          const SweepOptions& opts) {
  std::vector<SweepRecord> out;
  out.reserve(cells.size());
  for (const GridCell& c : cells) out.push_back(run_cell(c, opts));
  return out;
}

std::vector<SweepRecord> run_sweep_parallel(std::span<const GridCell> cells,
                                            const SweepOptions& opts, int jobs) {
  std::vector<SweepRecord> out(cells.size());
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = run_cell(cells[i], opts);
  return out;
}

}  // namespace ydecay
