#include "pem/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "pem/errors.hpp"

namespace pem::cli {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double plain_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("not an integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "on" || t == "true" || t == "1" || t == "yes") return true;
  if (t == "off" || t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("not a switch (on/off): '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Setter number(double ModelParams::*field) {
  return [field](RunConfig& c, const std::string& v) { c.params.*field = parse_number(v); };
}

Setter sim_number(double SimConfig::*field) {
  return [field](RunConfig& c, const std::string& v) { c.sim.*field = parse_number(v); };
}

const std::vector<std::pair<std::string, Setter>>& table() {
  static const std::vector<std::pair<std::string, Setter>> t = {
      {"k", number(&ModelParams::k)},
      {"lambda", number(&ModelParams::lambda)},
      {"mu", number(&ModelParams::mu)},
      {"rho_f0", number(&ModelParams::rho_f0)},
      {"D", number(&ModelParams::D)},
      {"S_sieve", number(&ModelParams::S_sieve)},
      {"sigma1", number(&ModelParams::sigma1)},
      {"p_a", number(&ModelParams::p_a)},
      {"p_st", number(&ModelParams::p_st)},
      {"F0", number(&ModelParams::F0)},
      {"r0", number(&ModelParams::r0)},
      {"R0", number(&ModelParams::R0)},
      {"N", [](RunConfig& c, const std::string& v) { c.sim.N = static_cast<int>(parse_integer(v)); }},
      {"dt", sim_number(&SimConfig::dt)},
      {"dt_max", sim_number(&SimConfig::dt_max)},
      {"dt_min", sim_number(&SimConfig::dt_min)},
      {"dt_growth", sim_number(&SimConfig::dt_growth)},
      {"t_end", sim_number(&SimConfig::t_end)},
      {"quasi_static", [](RunConfig& c, const std::string& v) { c.sim.quasi_static = parse_bool(v); }},
      {"steady_tol", sim_number(&SimConfig::steady_tol)},
      {"stop_at_steady",
       [](RunConfig& c, const std::string& v) { c.sim.stop_at_steady = parse_bool(v); }},
      {"load_ramp", sim_number(&SimConfig::load_ramp)},
      {"load_off_time", sim_number(&SimConfig::load_off_time)},
      {"traction_form",
       [](RunConfig& c, const std::string& v) {
         const auto t = lower(trim(v));
         if (t == "ring") c.sim.traction = TractionForm::ring;
         else if (t == "annulus") c.sim.traction = TractionForm::annulus;
         else throw ConfigError("traction_form must be ring or annulus");
       }},
      {"output_interval", sim_number(&SimConfig::output_interval)},
      {"max_steps",
       [](RunConfig& c, const std::string& v) { c.sim.max_steps = static_cast<int>(parse_integer(v)); }},
      {"geometry",
       [](RunConfig& c, const std::string& v) {
         const auto t = lower(trim(v));
         if (t == "circle") c.geometry = Geometry::circle;
         else if (t == "annulus") c.geometry = Geometry::annulus;
         else throw ConfigError("geometry must be circle or annulus");
       }},
      {"case",
       [](RunConfig& c, const std::string& v) {
         const auto t = lower(trim(v));
         if (t == "dirichlet") c.stationary_case = StationaryCase::dirichlet;
         else if (t == "neumann") c.stationary_case = StationaryCase::neumann;
         else throw ConfigError("case must be dirichlet or neumann");
       }},
      {"r_st", [](RunConfig& c, const std::string& v) { c.r_st = parse_number(v); }},
      {"samples",
       [](RunConfig& c, const std::string& v) { c.samples = static_cast<int>(parse_integer(v)); }},
      {"svg", [](RunConfig& c, const std::string& v) { c.svg = parse_bool(v); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = trim(v); }},
      {"initial_varrho",
       [](RunConfig& c, const std::string& v) { c.initial_varrho = parse_number(v); }},
      {"initial_theta",
       [](RunConfig& c, const std::string& v) { c.initial_theta = parse_number(v); }},
      {"source",
       [](RunConfig& c, const std::string& v) {
         const auto t = lower(trim(v));
         if (t == "stationary") c.symmetry.source = SymmetrySource::stationary;
         else if (t == "polynomial") c.symmetry.source = SymmetrySource::polynomial;
         else throw ConfigError("source must be stationary or polynomial");
       }},
      {"elements", [](RunConfig& c, const std::string& v) { c.symmetry.elements = split_list(v); }},
      {"epsilon", [](RunConfig& c, const std::string& v) { c.symmetry.epsilon = parse_number(v); }},
      {"harmonic_degree",
       [](RunConfig& c, const std::string& v) {
         c.symmetry.harmonic_degree = static_cast<int>(parse_integer(v));
       }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         c.symmetry.seed = static_cast<unsigned long long>(parse_integer(v));
       }},
      {"poly_degree",
       [](RunConfig& c, const std::string& v) {
         c.symmetry.poly_degree = static_cast<int>(parse_integer(v));
       }},
      {"sym_tolerance",
       [](RunConfig& c, const std::string& v) { c.symmetry.tolerance = parse_number(v); }},
      {"sym_points",
       [](RunConfig& c, const std::string& v) {
         c.symmetry.points = static_cast<int>(parse_integer(v));
       }},
      {"sweep_param", [](RunConfig& c, const std::string& v) { c.sweep.param = trim(v); }},
      {"sweep_values",
       [](RunConfig& c, const std::string& v) {
         c.sweep.values.clear();
         for (const auto& item : split_list(v)) c.sweep.values.push_back(parse_number(item));
       }},
      {"sweep_target",
       [](RunConfig& c, const std::string& v) {
         const auto t = lower(trim(v));
         if (t == "rst") c.sweep.target = SweepTarget::rst;
         else if (t == "transient") c.sweep.target = SweepTarget::transient;
         else throw ConfigError("sweep_target must be rst or transient");
       }},
  };
  return t;
}

const std::vector<std::string> kElementNames{
    "time_translation",      "x_translation",  "y_translation",      "rotation",
    "quarter_turn",          "concentration_scaling", "pressure_shift", "displacement_shift",
    "broken_displacement"};

const std::vector<std::string> kSweepParams{"k",  "lambda", "mu", "p_a", "p_st",
                                            "F0", "r0",     "R0"};

}  // namespace

double parse_number(const std::string& raw) {
  std::string t = trim(raw);
  if (t.empty()) throw ConfigError("empty number");
  const auto pos = lower(t).rfind("pi");
  if (pos != std::string::npos && pos + 2 == t.size()) {
    std::string head = trim(t.substr(0, pos));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    const double factor = head.empty() ? 1.0 : head == "-" ? -1.0 : plain_number(head);
    return factor * std::numbers::pi;
  }
  return plain_number(t);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : table()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& t = table();
  const auto it = std::find_if(t.begin(), t.end(), [&](const auto& e) { return e.first == key; });
  if (it == t.end()) throw ConfigError("unknown configuration key '" + key + "'");
  try {
    it->second(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void apply_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_setting(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

void apply_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_text(config, buf.str(), path.string());
}

void validate(const RunConfig& c) {
  std::vector<std::string> problems = param_violations(c.params);
  try {
    c.sim.validate();
  } catch (const ParameterError& e) {
    problems.insert(problems.end(), e.violations().begin(), e.violations().end());
  }
  if (c.samples < 2) problems.push_back("samples must be >= 2");
  if (c.initial_theta && !(*c.initial_theta > 0.0 && *c.initial_theta < 1.0))
    problems.push_back("initial_theta must lie in (0, 1)");
  if (c.initial_varrho && !(*c.initial_varrho > 0.0))
    problems.push_back("initial_varrho must be > 0");
  for (const auto& e : c.symmetry.elements)
    if (std::find(kElementNames.begin(), kElementNames.end(), e) == kElementNames.end())
      problems.push_back("unknown symmetry element '" + e + "'");
  if (c.symmetry.harmonic_degree < 1 || c.symmetry.harmonic_degree > 6)
    problems.push_back("harmonic_degree must lie in 1..6");
  if (c.symmetry.poly_degree < 0 || c.symmetry.poly_degree > 8)
    problems.push_back("poly_degree must lie in 0..8");
  if (!(c.symmetry.tolerance > 0.0)) problems.push_back("sym_tolerance must be > 0");
  if (c.symmetry.points < 1) problems.push_back("sym_points must be >= 1");
  if (std::find(kSweepParams.begin(), kSweepParams.end(), c.sweep.param) == kSweepParams.end())
    problems.push_back("sweep_param must be one of k, lambda, mu, p_a, p_st, F0, r0, R0");
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out))
    throw ConfigError("cannot create output directory '" + config.out.string() + "'");
  const auto probe = config.out / ".pem_sim_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory '" + config.out.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

InitialProfiles initial_profiles(const RunConfig& config) {
  InitialProfiles p;
  if (config.initial_varrho) {
    const double v = *config.initial_varrho;
    p.varrho = [v](double) { return v; };
  }
  if (config.initial_theta) {
    const double v = *config.initial_theta;
    p.theta = [v](double) { return v; };
  }
  return p;
}

std::string symmetry_source_name(SymmetrySource s) {
  return s == SymmetrySource::stationary ? "stationary" : "polynomial";
}

std::string sweep_target_name(SweepTarget t) { return t == SweepTarget::rst ? "rst" : "transient"; }

}  // namespace pem::cli
