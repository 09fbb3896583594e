#ifndef ZERONOISE_SDE_HPP
#define ZERONOISE_SDE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "zeronoise/geometry.hpp"
#include "zeronoise/potential.hpp"

namespace zeronoise {

/// Well designated for the exit time e_w: the region
/// { Theta(u) <= level, dist(u, center) < radius } on the sphere.
struct WellSpec {
  Vec center;
  double radius = 0.0;
  double level = 0.0;
};

struct SimConfig {
  double epsilon = 0.01;   // noise intensity; 0 selects the drift-only flow
  double dt = 0.0;         // 0 -> epsilon / 100
  double t_max = 1.5;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  Vec x0;                  // empty -> origin
  int record_stride = 1;   // steps between stored samples

  // Threshold parameters of the stopping-time instrumentation.
  double v0 = 10.0;          // potential level multiplier: tau = first V >= v0 eps^2
  double a = 0.1;            // g level: zeta = first g >= 2a
  double delta = 0.3;        // radius for rho_delta
  double rho_exit = 0.3;     // exit radius for direction measurement
  double perturbation_eta = 0.0;  // eta in nu = first V + eta R^{1+alpha} >= v0 eps^2
  double block_T = 1.0;      // Sigma increment defining the sigma_j blocks
  std::optional<WellSpec> well;

  bool stop_on_exit = false;     // stop stepping once R >= rho_exit
  double blowup_radius = 1e6;

  double step() const { return dt > 0.0 ? dt : epsilon / 100.0; }
  void validate() const;  // throws ConfigError
};

struct PathRecord {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<double> radius;
  std::vector<double> potential;
  std::vector<double> g_values;
  std::vector<Vec> angles;   // unit direction, carried over while R < 1e-12
  std::vector<double> sigma; // trapezoid of R^{alpha-1} (floored at R = 1e-12)
  int dimension() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
};

struct HitTime {
  double time = 0.0;
  bool hit = false;
};

struct StoppingTimes {
  HitTime tau_v0;     // first V >= v0 eps^2
  HitTime nu_v0;      // first V + eta R^{1+alpha} >= v0 eps^2
  HitTime kappa;      // first R >= eps^{2/(1+beta)+(beta-alpha)/2}
  HitTime gamma;      // first g = 0 after g was positive
  HitTime zeta;       // first g >= 2a
  HitTime xi_half;    // first V <= V_ref/2 at or after the tau anchor
  HitTime Xi_one;     // first V >= 1
  HitTime rho_delta;  // first R >= delta
  HitTime exit_rho;   // first R >= rho_exit (drives failed-exit detection)
  HitTime well_exit;  // e_w: first exit from the designated well
  std::vector<double> sigma_blocks;  // block boundaries (from zeta) with Sigma step block_T
  double g_at_tau = 0.0;
  double kappa_threshold = 0.0;
};

/// Per-step view handed to an observer: the state at time t = n dt before the
/// Euler update.
struct StepView {
  std::size_t n;
  double t;
  const double* x;
  double radius;
  double potential;
  double g;
  const double* unit;
  double sigma;
};

using StepObserver = std::function<void(const StepView&)>;
/// Fills out[0..d) with the i.i.d. standard normal vector of step n.
using NoiseSupplier = std::function<void(std::size_t n, double* out)>;

/// Euler-Maruyama simulation of dX = grad V(X) dt + eps dB with online
/// stopping-time detection at step granularity.
std::pair<PathRecord, StoppingTimes> simulate_path(const PotentialModel& model,
                                                   const SimConfig& config);

/// Same, with injected noise (coupling tests) and an optional observer.
std::pair<PathRecord, StoppingTimes> simulate_path(const PotentialModel& model,
                                                   const SimConfig& config,
                                                   const NoiseSupplier& noise,
                                                   const StepObserver& observer = nullptr);

/// True iff the stored radius series never reached rho_exit.
bool detect_failed_exit(const PathRecord& path, const SimConfig& config);

struct BlockDeviation {
  double start_time = 0.0;
  double end_time = 0.0;
  double sigma_span = 0.0;
  double sup_deviation = 0.0;
  bool partial = false;  // block ended with Sigma increment < block_T
};

/// Compare the path angle theta^eps with the flow phi run under the
/// time-change Sigma, block by block from `from`; blocks are Sigma increments
/// of block_T, truncated at the first time g <= g_floor after `from`.
/// Throws EmptyRangeError when g <= g_floor at `from`.
std::vector<BlockDeviation> compare_angle_flow(const PathRecord& path,
                                               const AngularProfile& profile, double from,
                                               double block_T, double g_floor);

}  // namespace zeronoise

#endif
