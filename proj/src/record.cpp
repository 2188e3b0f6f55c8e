#include "ydecay/record.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace ydecay {

using nlohmann::json;

namespace {

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null())
    v.reset();
  else
    v = it->get<T>();
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number in CSV: " + s);
  return x;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::runtime_error("bad boolean in CSV: " + s);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void to_json(json& j, const SweepRecord& r) {
  j = json::object();
  j["index"] = r.index;
  j["n"] = r.n;
  j["m"] = r.m;
  j["beta"] = r.beta;
  j["rho"] = r.rho;
  j["eta"] = r.eta;
  put_opt(j, "alpha", r.alpha);
  j["theorem_applies"] = r.theorem_applies;
  j["reason"] = r.reason;
  j["alpha_vs_nbeta"] = r.alpha_vs_nbeta;
  j["yamabe_case"] = r.yamabe_case;
  j["explicit_case"] = r.explicit_case;
  j["status"] = r.status;
  put_opt(j, "w_infinity", r.w_infinity);
  put_opt(j, "w_limit", r.w_limit);
  put_opt(j, "w_deviation", r.w_deviation);
  put_opt(j, "logslope_limit", r.logslope_limit);
  put_opt(j, "logslope_deviation", r.logslope_deviation);
  put_opt(j, "max_ode_residual", r.max_ode_residual);
  put_opt(j, "max_integral_residual", r.max_integral_residual);
  j["lower_bound"] = r.lower_bound;
  j["upper_bound"] = r.upper_bound;
  put_opt(j, "r_limit", r.r_limit);
  put_opt(j, "k0_limit", r.k0_limit);
  put_opt(j, "k1_limit", r.k1_limit);
  put_opt(j, "runtime_s", r.runtime_s);
  j["steps"] = r.steps;
  put_opt(j, "last_r", r.last_r);
}

void from_json(const json& j, SweepRecord& r) {
  r.index = j.at("index").get<std::size_t>();
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<double>();
  r.beta = j.at("beta").get<double>();
  r.rho = j.at("rho").get<double>();
  r.eta = j.at("eta").get<double>();
  get_opt(j, "alpha", r.alpha);
  r.theorem_applies = j.at("theorem_applies").get<bool>();
  r.reason = j.at("reason").get<std::string>();
  r.alpha_vs_nbeta = j.at("alpha_vs_nbeta").get<std::string>();
  r.yamabe_case = j.at("yamabe_case").get<bool>();
  r.explicit_case = j.at("explicit_case").get<bool>();
  r.status = j.at("status").get<std::string>();
  get_opt(j, "w_infinity", r.w_infinity);
  get_opt(j, "w_limit", r.w_limit);
  get_opt(j, "w_deviation", r.w_deviation);
  get_opt(j, "logslope_limit", r.logslope_limit);
  get_opt(j, "logslope_deviation", r.logslope_deviation);
  get_opt(j, "max_ode_residual", r.max_ode_residual);
  get_opt(j, "max_integral_residual", r.max_integral_residual);
  r.lower_bound = j.at("lower_bound").get<std::string>();
  r.upper_bound = j.at("upper_bound").get<std::string>();
  get_opt(j, "r_limit", r.r_limit);
  get_opt(j, "k0_limit", r.k0_limit);
  get_opt(j, "k1_limit", r.k1_limit);
  get_opt(j, "runtime_s", r.runtime_s);
  r.steps = j.at("steps").get<std::size_t>();
  get_opt(j, "last_r", r.last_r);
}

void write_jsonl(std::ostream& os, const std::vector<SweepRecord>& records) {
  for (const SweepRecord& r : records) os << json(r).dump() << '\n';
}

std::vector<SweepRecord> read_jsonl(std::istream& is) {
  std::vector<SweepRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line).get<SweepRecord>());
  }
  return out;
}

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> h = {
      "index",          "n",
      "m",              "beta",
      "rho",            "eta",
      "alpha",          "theorem_applies",
      "reason",         "alpha_vs_nbeta",
      "yamabe_case",    "explicit_case",
      "status",         "w_infinity",
      "w_limit",        "w_deviation",
      "logslope_limit", "logslope_deviation",
      "max_ode_residual", "max_integral_residual",
      "lower_bound",    "upper_bound",
      "r_limit",        "k0_limit",
      "k1_limit",       "runtime_s",
      "steps",          "last_r"};
  return h;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  const auto& h = csv_header();
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << "\r\n";
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  for (const SweepRecord& r : records) {
    const std::vector<std::string> row = {std::to_string(r.index),
                                          std::to_string(r.n),
                                          format_double(r.m),
                                          format_double(r.beta),
                                          format_double(r.rho),
                                          format_double(r.eta),
                                          opt_field(r.alpha),
                                          b(r.theorem_applies),
                                          r.reason,
                                          r.alpha_vs_nbeta,
                                          b(r.yamabe_case),
                                          b(r.explicit_case),
                                          r.status,
                                          opt_field(r.w_infinity),
                                          opt_field(r.w_limit),
                                          opt_field(r.w_deviation),
                                          opt_field(r.logslope_limit),
                                          opt_field(r.logslope_deviation),
                                          opt_field(r.max_ode_residual),
                                          opt_field(r.max_integral_residual),
                                          r.lower_bound,
                                          r.upper_bound,
                                          opt_field(r.r_limit),
                                          opt_field(r.k0_limit),
                                          opt_field(r.k1_limit),
                                          opt_field(r.runtime_s),
                                          std::to_string(r.steps),
                                          opt_field(r.last_r)};
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\r\n";
  }
}

std::vector<SweepRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) return {};
  if (csv_split(line) != csv_header()) throw std::runtime_error("unexpected CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv_split(line);
    if (f.size() != csv_header().size()) throw std::runtime_error("wrong CSV field count");
    SweepRecord r;
    std::size_t i = 0;
    r.index = std::stoul(f[i++]);
    r.n = std::stoi(f[i++]);
    r.m = *parse_opt(f[i++]);
    r.beta = *parse_opt(f[i++]);
    r.rho = *parse_opt(f[i++]);
    r.eta = *parse_opt(f[i++]);
    r.alpha = parse_opt(f[i++]);
    r.theorem_applies = parse_bool(f[i++]);
    r.reason = f[i++];
    r.alpha_vs_nbeta = f[i++];
    r.yamabe_case = parse_bool(f[i++]);
    r.explicit_case = parse_bool(f[i++]);
    r.status = f[i++];
    r.w_infinity = parse_opt(f[i++]);
    r.w_limit = parse_opt(f[i++]);
    r.w_deviation = parse_opt(f[i++]);
    r.logslope_limit = parse_opt(f[i++]);
    r.logslope_deviation = parse_opt(f[i++]);
    r.max_ode_residual = parse_opt(f[i++]);
    r.max_integral_residual = parse_opt(f[i++]);
    r.lower_bound = f[i++];
    r.upper_bound = f[i++];
    r.r_limit = parse_opt(f[i++]);
    r.k0_limit = parse_opt(f[i++]);
    r.k1_limit = parse_opt(f[i++]);
    r.runtime_s = parse_opt(f[i++]);
    r.steps = std::stoul(f[i++]);
    r.last_r = parse_opt(f[i++]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ydecay
