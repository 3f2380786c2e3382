#include "fraclab/config.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fraclab/acceptance.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/exact_recursion.hpp"
#include "fraclab/model_geometry.hpp"
#include "fraclab/routes.hpp"
#include "fraclab/scattering.hpp"

namespace fraclab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad("key '" + key + "': '" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(x)) bad("key '" + key + "': '" + v + "' is not a finite number");
  return x;
}

const std::vector<std::string> kKnownKeys = {
    "command", "gamma",    "n",       "grid",   "method", "points",   "grading", "far",     "strategy",
    "lambda",  "route",    "input",   "output", "order",  "eps",      "scan",    "k",       "trials",
    "seed",    "threads",  "criteria", "fault_d_gamma", "tolerance"};

FracParams make_params(const ExperimentConfig& c) {
  const double g = c.require_double("gamma");
  const int n = c.get_int("n", 2);
  if (std::abs(g - std::round(g)) <= 1e-3)
    bad("gamma = " + c.get("gamma") + " is within 1e-3 of an integer (integer orders are excluded)");
  FracParams::Options o;
  o.d_gamma_scale = c.get_double("fault_d_gamma", 1.0);
  try {
    return FracParams(n, g, o);
  } catch (const std::exception& e) {
    bad(e.what());
  }
}

SolveMethod method_of(const ExperimentConfig& c) {
  try {
    return parse_solve_method(c.get("method", "semi-analytic"));
  } catch (const std::exception& e) {
    bad(e.what());
  }
}

ExtensionOptions extension_options(const ExperimentConfig& c) {
  ExtensionOptions o;
  o.method = method_of(c);
  o.points = c.get_int("points", 4096);
  o.grading = c.get_double("grading", 4.0);
  if (o.points < 64) bad("points must be at least 64");
  if (!(o.grading >= 1.0)) bad("grading must be >= 1");
  const auto far = c.get("far", "robin");
  if (far == "robin")
    o.far = FarBoundary::Robin;
  else if (far == "dirichlet")
    o.far = FarBoundary::Dirichlet;
  else
    bad("far must be robin or dirichlet");
  try {
    o.strategy = parse_strategy(c.get("strategy", "auto"));
  } catch (const std::exception& e) {
    bad(e.what());
  }
  return o;
}

// Either the `input` CSV field or cos(x1) + cos(2 x2) on a `grid`^2 torus.
SpectralField input_field(const ExperimentConfig& c) {
  if (c.has("input")) {
    std::ifstream is(c.get("input"));
    if (!is) bad("cannot open input '" + c.get("input") + "'");
    try {
      return read_csv(is);
    } catch (const std::exception& e) {
      bad("input '" + c.get("input") + "': " + e.what());
    }
  }
  const int g = c.get_int("grid", 64);
  if (g < 2 || (g & (g - 1)) != 0) bad("grid must be a power of two");
  return acceptance_field_c1(g);
}

// Output stream: the `output` file (its directory must exist) or the default stream.
class Sink {
public:
  Sink(const ExperimentConfig& c, std::ostream& fallback) : os_(&fallback) {
    if (!c.has("output")) return;
    const std::filesystem::path p(c.get("output"));
    const auto dir = p.parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir))
      bad("output directory '" + dir.string() + "' does not exist");
    file_.open(p, std::ios::binary);
    if (!file_) bad("cannot write output '" + p.string() + "'");
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }

private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_json(Sink& sink, const nlohmann::json& j) { *sink << j.dump(2) << "\n"; }

int cmd_apply(const ExperimentConfig& c, std::ostream& out) {
  const auto p = make_params(c);
  const auto f = input_field(c);
  const auto route = c.get("route", "extension");
  Sink sink(c, out);
  SpectralField g;
  if (route == "oracle" || route == "fourier")
    g = fractional_multiplier_apply(f, p.gamma);
  else if (route == "extension")
    g = extension_apply(f, p, extension_options(c));
  else if (route == "scattering") {
    ScatterOptions so;
    so.method = method_of(c);
    g = scattering_apply(f, p, so);
  } else
    bad("route must be oracle, extension or scattering");
  write_csv(*sink, g);
  return 0;
}

int cmd_extend(const ExperimentConfig& c, std::ostream& out) {
  const auto p = make_params(c);
  const double lam = c.require_double("lambda");
  if (!(lam > 0.0)) bad("lambda must be positive");
  const auto o = extension_options(c);
  const double tol = c.get_double("tolerance", o.method == SolveMethod::SemiAnalytic ? 1e-6 : 1e-3);
  const double value = extension_multiplier(lam, p, o);
  auto r = make_report("extension.gamma" + c.get("gamma") + ".lambda" + c.get("lambda"),
                       "extension multiplier = |xi|^{2gamma}", value, std::pow(lam, 2.0 * p.gamma), tol);
  Sink sink(c, out);
  if (c.has("output")) {
    // profile CSV beside the JSON report
    std::ofstream prof(c.get("output") + ".profile.csv", std::ios::binary);
    prof << profile_csv(solve_mode_extension(lam, p.m0(), o.method, o.points, o.grading));
  }
  emit_json(sink, to_json(std::vector<VerificationReport>{r}));
  return r.pass ? 0 : 1;
}

int cmd_scatter(const ExperimentConfig& c, std::ostream& out) {
  const auto p = make_params(c);
  const double lam = c.require_double("lambda");
  if (!(lam > 0.0)) bad("lambda must be positive");
  ScatterOptions so;
  so.method = method_of(c);
  const double tol = c.get_double("tolerance", so.method == SolveMethod::SemiAnalytic ? 1e-6 : 1e-3);
  const auto sol = solve_poisson_mode(lam, p, so);
  std::vector<VerificationReport> rs{make_report("scattering.gamma" + c.get("gamma") + ".lambda" + c.get("lambda"),
                                                 "d G0 / F0 = |xi|^{2gamma}", p.d_gamma * sol.G0 / sol.F0,
                                                 std::pow(lam, 2.0 * p.gamma), tol)};
  if (p.gamma > 1.0) rs.push_back(f2_consistency(p, lam, so));
  Sink sink(c, out);
  auto j = to_json(rs);
  j["F0"] = sol.F0;
  j["G0"] = sol.G0;
  emit_json(sink, j);
  return all_pass(rs) ? 0 : 1;
}

int cmd_energy(const ExperimentConfig& c, std::ostream& out, const std::string& order) {
  const auto p = make_params(c);
  const auto f = input_field(c);
  EnergyOptions o;
  o.method = method_of(c);
  EnergyReport r;
  try {
    if (order == "1")
      r = energy_order1(f, p, o, c.get_double("tolerance", 1e-3));
    else if (order == "2")
      r = energy_order2(f, p, o, c.get_double("tolerance", 1e-3));
    else if (order == "renorm")
      r = renormalized_energy(f, p, c.get_list("eps"), o, c.get_double("tolerance", 1e-2));
    else
      bad("order must be 1, 2 or renorm");
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  Sink sink(c, out);
  *sink << to_json(r) << "\n";
  return r.pass ? 0 : 1;
}

int cmd_model_q(const ExperimentConfig& c, std::ostream& out) {
  const int n = c.get_int("n", 4);
  if (n < 2) bad("n must be >= 2");
  std::vector<ModelScanRow> rows;
  try {
    if (c.has("scan")) {
      const auto s = c.get("scan");
      double lo = 0, hi = 0;
      int steps = 0;
      char c1 = 0, c2 = 0;
      std::istringstream is(s);
      if (!(is >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || steps < 1 || !(lo > 0.0) || !(hi >= lo))
        bad("scan must be lo:hi:steps with 0 < lo <= hi and steps >= 1");
      rows = model_scan(n, lo, hi, steps);
    } else {
      const double g = c.require_double("gamma");
      if (std::abs(g - std::round(g)) <= 1e-9) bad("gamma = " + c.get("gamma") + " is an integer");
      rows = model_scan(n, g, g, 1);
    }
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  Sink sink(c, out);
  *sink << model_scan_csv(rows);
  const double tol = c.get_double("tolerance", 1e-5);
  for (const auto& r : rows)
    if (!std::isnan(r.rel_err) && !(r.rel_err <= tol)) return 1;
  return 0;
}

int cmd_verify_recursion(const ExperimentConfig& c, std::ostream& out) {
  const int k = c.get_int("k", 8), trials = c.get_int("trials", 20), seed = c.get_int("seed", 0);
  if (k < 0 || k > 10) bad("k must be in [0, 10]");
  if (trials < 1) bad("trials must be >= 1");
  if (seed < 0) bad("seed must be nonnegative");
  const auto r = verify_appendix(k, trials, static_cast<std::uint64_t>(seed));
  Sink sink(c, out);
  emit_json(sink, to_json(std::vector<VerificationReport>{r}));
  return r.pass ? 0 : 1;
}

int cmd_report_all(const ExperimentConfig& c, std::ostream& out) {
  AcceptanceOptions o;
  o.d_gamma_scale = c.get_double("fault_d_gamma", 1.0);
  if (!(o.d_gamma_scale > 0.0)) bad("fault_d_gamma must be positive");
  const int seed = c.get_int("seed", 0);
  if (seed < 0) bad("seed must be nonnegative");
  o.seed = static_cast<std::uint64_t>(seed);
  std::vector<int> ids;
  for (double v : c.get_list("criteria")) {
    if (v != std::round(v) || v < 1 || v > 9) bad("criteria must be integers in 1..9");
    ids.push_back(static_cast<int>(v));
  }
  if (c.has("criteria") && ids.empty()) {
    // explicitly empty list: empty table
    Sink sink(c, out);
    emit_json(sink, to_json(std::vector<VerificationReport>{}));
    return 0;
  }
  Sink sink(c, out);
  const auto cs = run_acceptance(o, ids);
  const auto reports = flatten_reports(cs);
  auto j = to_json(reports);
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& cr : cs) crit.push_back({{"id", cr.id}, {"title", cr.title}, {"pass", cr.pass}});
  j["criteria"] = crit;
  emit_json(sink, j);
  if (c.has("output")) {
    std::ofstream txt(c.get("output") + ".txt", std::ios::binary);
    txt << format_table(reports);
    for (const auto& cr : cs) txt << format_criterion_line(cr) << "\n";
  }
  bool ok = true;
  for (const auto& cr : cs) ok = ok && cr.pass;
  return ok ? 0 : 1;
}

}  // namespace

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string ExperimentConfig::require(const std::string& key) const {
  if (!has(key)) bad("missing required key '" + key + "' for command '" + command + "'");
  return get(key);
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, get(key)) : fallback;
}

double ExperimentConfig::require_double(const std::string& key) const { return to_double(key, require(key)); }

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = to_double(key, get(key));
  if (v != std::round(v) || std::abs(v) > 1e9) bad("key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream is(get(key));
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) bad("line " + std::to_string(lineno) + ": empty key");
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      bad("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (c.values.count(key) || (key == "command" && !c.command.empty()))
      bad("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (key == "command")
      c.command = value;
    else
      c.values[key] = value;
  }
  if (c.command.empty()) bad("config has no 'command' key");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) bad("cannot open config '" + path + "'");
  return parse_config(is);
}

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {"apply", "P_{2gamma} f by the Fourier multiplier, the weighted extension or the scattering route",
       "gamma n route method input|grid output"},
      {"extend", "one-mode extension profile and the weighted Neumann extraction against |xi|^{2gamma}",
       "gamma n lambda method points grading far strategy output"},
      {"scatter", "one-mode Poisson solution, d G0/F0 = |xi|^{2gamma} and the f_(2) coefficient",
       "gamma n lambda method output"},
      {"energy", "order-1 and order-2 energy identities (orders 1, 2) or the renormalized energy (renorm)",
       "order gamma n method input|grid eps output"},
      {"renorm", "renormalized energy limit, eps-extrapolated", "gamma n input|grid eps output"},
      {"model-q", "model Q-curvature: closed form vs hypergeometric ODE, adapted-metric curvature",
       "n gamma|scan output"},
      {"verify-recursion", "appendix q-recursion = closed form, 2^k q_k = factorization (exact rationals)",
       "k trials seed output"},
      {"report-all", "acceptance criteria 1-9 as one report table", "criteria fault_d_gamma seed output"},
  };
  return table;
}

int run_command(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.has("threads")) {
    const int t = cfg.get_int("threads", 0);
    if (t < 1) bad("threads must be >= 1");
    omp_set_num_threads(t);
  }
  const auto& cmd = cfg.command;
  if (cmd == "apply") return cmd_apply(cfg, out);
  if (cmd == "extend") return cmd_extend(cfg, out);
  if (cmd == "scatter") return cmd_scatter(cfg, out);
  if (cmd == "energy") return cmd_energy(cfg, out, cfg.require("order"));
  if (cmd == "renorm") return cmd_energy(cfg, out, "renorm");
  if (cmd == "model-q") return cmd_model_q(cfg, out);
  if (cmd == "verify-recursion") return cmd_verify_recursion(cfg, out);
  if (cmd == "report-all") return cmd_report_all(cfg, out);
  bad("unknown command '" + cmd + "'");
}

int run_config(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const int code = run_command(load_config(path), out);
    if (code != 0) err << "fraclab: " << path << ": tolerance failure\n";
    return code;
  } catch (const ConfigError& e) {
    err << "fraclab: invalid config " << path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "fraclab: " << path << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fraclab
