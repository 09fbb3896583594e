#include "zeronoise/config.hpp"

#include <fstream>
#include <sstream>

#include "zeronoise/errors.hpp"

namespace zeronoise {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config: bad number '" + item + "'");
    }
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad number '" + s + "'");
}

long long parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad integer '" + s + "'");
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config: bad boolean '" + s + "'");
}

}  // namespace

void ExperimentConfig::apply_override(const std::string& dotted_key, const std::string& raw) {
  std::string value = trim(raw);
  auto dotpos = dotted_key.find('.');
  if (dotpos == std::string::npos)
    throw ConfigError("config: expected section.key, got '" + dotted_key + "'");
  std::string section = dotted_key.substr(0, dotpos);
  std::string key = dotted_key.substr(dotpos + 1);

  if (section == "model") {
    if (key == "profile") profile = value;
    else if (key == "alpha") alpha = parse_double(value);
    else if (key == "beta") { beta = parse_double(value); beta_given = true; }
    else if (key == "dim") dim = static_cast<int>(parse_int(value));
    else if (key == "radial_value") radial_value = parse_double(value);
    else if (key == "cap_amplitude") cap_amplitude = parse_double(value);
    else if (key == "cap_kappa") cap_kappa = parse_double(value);
    else if (key == "cap_p") cap_p = parse_double(value);
    else if (key == "family") family = value;
    else if (key == "support") support = value;
    else if (key == "coeffs") coeffs = value;
    else if (key == "profile_spec") profile_spec = value;
    else throw ConfigError("config: unknown key model." + key);
  } else if (section == "simulation") {
    if (key == "epsilons") epsilons = parse_list(value);
    else if (key == "dt") dt = parse_double(value);
    else if (key == "t_max") t_max = parse_double(value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(value));
    else if (key == "n_paths") n_paths = static_cast<int>(parse_int(value));
    else if (key == "workers") workers = static_cast<int>(parse_int(value));
    else if (key == "record_dt") record_dt = parse_double(value);
    else if (key == "x0") x0 = parse_list(value);
    else if (key == "stop_on_exit") stop_on_exit = parse_bool(value);
    else if (key == "flow_theta0") flow_theta0 = parse_double(value);
    else if (key == "flow_t_end") flow_t_end = parse_double(value);
    else if (key == "flow_dt") flow_dt = parse_double(value);
    else throw ConfigError("config: unknown key simulation." + key);
  } else if (section == "thresholds") {
    if (key == "v0") v0 = parse_double(value);
    else if (key == "a") a = parse_double(value);
    else if (key == "delta") delta = parse_double(value);
    else if (key == "rho_exit") rho_exit = parse_double(value);
    else if (key == "direction_r") direction_r = parse_double(value);
    else if (key == "epsilon_window") epsilon_window = parse_double(value);
    else if (key == "mu") mu = parse_double(value);
    else if (key == "block_T") block_T = parse_double(value);
    else if (key == "eta") eta = parse_double(value);
    else throw ConfigError("config: unknown key thresholds." + key);
  } else if (section == "output") {
    if (key == "dir") out_dir = value;
    else if (key == "per_path") per_path = parse_bool(value);
    else if (key == "svg") svg = parse_bool(value);
    else throw ConfigError("config: unknown key output." + key);
  } else {
    throw ConfigError("config: unknown section [" + section + "]");
  }
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    if (section.empty())
      throw ConfigError("config: key outside a section at line " + std::to_string(lineno));
    cfg.apply_override(section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

PotentialModel PotentialModel_from(const ExperimentConfig& cfg) {
  ProfileParams params;
  ProfilePtr prof;
  if (cfg.profile == "radial") {
    params["dim"] = std::to_string(cfg.dim);
    params["value"] = std::to_string(cfg.radial_value);
    prof = make_profile("radial", params);
  } else if (cfg.profile == "spherical-d") {
    params["dim"] = std::to_string(cfg.dim);
    params["amplitude"] = std::to_string(cfg.cap_amplitude);
    params["kappa"] = std::to_string(cfg.cap_kappa);
    params["p"] = std::to_string(cfg.cap_p);
    prof = make_profile("spherical-d", params);
  } else if (cfg.profile == "bump2d") {
    params["family"] = cfg.family;
    params["support"] = cfg.support;
    params["coeffs"] = cfg.coeffs;
    prof = make_profile("bump2d", params);
  } else if (cfg.profile == "custom") {
    if (cfg.profile_spec.empty()) throw ConfigError("config: model.profile_spec required");
    prof = load_profile_spec(cfg.profile_spec);
  } else {
    prof = make_profile(cfg.profile, params);
  }
  if (cfg.beta_given) return PotentialModel(prof, Exponents(cfg.alpha, cfg.beta));
  return PotentialModel::pure(prof, cfg.alpha);
}

PotentialModel ExperimentConfig::make_model() const { return PotentialModel_from(*this); }

SimConfig ExperimentConfig::make_sim_base() const {
  SimConfig sim;
  sim.epsilon = epsilons.empty() ? 0.01 : epsilons.front();
  sim.dt = dt;
  sim.t_max = t_max;
  sim.seed = seed;
  sim.x0 = x0;
  sim.v0 = v0;
  sim.a = a;
  sim.delta = delta;
  sim.rho_exit = rho_exit;
  sim.perturbation_eta = eta;
  sim.block_T = block_T;
  sim.stop_on_exit = stop_on_exit;
  return sim;
}

EnsembleOptions ExperimentConfig::make_ensemble_options() const {
  EnsembleOptions opt;
  opt.direction_r = direction_r;
  opt.epsilon_window = epsilon_window;
  opt.mu = mu;
  opt.record_dt = record_dt;
  return opt;
}

}  // namespace zeronoise
