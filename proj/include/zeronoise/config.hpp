#ifndef ZERONOISE_CONFIG_HPP
#define ZERONOISE_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zeronoise/montecarlo.hpp"
#include "zeronoise/potential.hpp"
#include "zeronoise/sde.hpp"

namespace zeronoise {

/// Experiment configuration: a key = value text file with [model],
/// [simulation], [thresholds] and [output] sections.  Unknown keys are
/// rejected; every field has a documented default (see the README).
struct ExperimentConfig {
  // [model]
  std::string profile = "sec7";
  double alpha = 0.5;
  double beta = 1.0;
  bool beta_given = false;
  int dim = 2;
  double radial_value = 1.0;
  double cap_amplitude = 1.0;
  double cap_kappa = 0.0;
  double cap_p = 1.0;
  std::string family;        // bump2d inline spec
  std::string support;
  std::string coeffs;
  std::string profile_spec;  // path to a custom profile spec file

  // [simulation]
  std::vector<double> epsilons = {0.01, 0.005, 0.002, 0.001};
  double dt = 0.0;        // 0 -> epsilon/100
  double t_max = 1.5;
  std::uint64_t seed = 12345;
  int n_paths = 200;
  int workers = 0;        // 0 -> hardware concurrency
  double record_dt = 2e-3;
  std::vector<double> x0; // empty -> origin
  bool stop_on_exit = false;
  double flow_theta0 = 0.1;  // cmd_flow initial angle (2D)
  double flow_t_end = 50.0;
  double flow_dt = 1e-3;

  // [thresholds]
  double v0 = 10.0;
  double a = 0.1;
  double delta = 0.3;
  double rho_exit = 0.3;
  double direction_r = 0.08 * M_PI;
  double epsilon_window = 0.2;
  double mu = 0.05;
  double block_T = 1.0;
  double eta = 0.0;

  // [output]
  std::string out_dir = "out";
  bool per_path = false;
  bool svg = true;

  static ExperimentConfig load(const std::string& path);       // ConfigError on parse issues
  static ExperimentConfig parse(const std::string& text);
  void apply_override(const std::string& dotted_key, const std::string& value);

  PotentialModel make_model() const;
  SimConfig make_sim_base() const;
  EnsembleOptions make_ensemble_options() const;
};

}  // namespace zeronoise

#endif
