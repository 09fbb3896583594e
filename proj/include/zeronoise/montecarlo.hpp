#ifndef ZERONOISE_MONTECARLO_HPP
#define ZERONOISE_MONTECARLO_HPP

#include <array>
#include <string>
#include <vector>

#include "zeronoise/sde.hpp"
#include "zeronoise/sphereflow.hpp"

namespace zeronoise {

/// Escape-rate exponent psi(alpha, p):
///   2a/(1+a) + (1-a)p/(p+1)   when a >= p,
///   (a+p)/(p+1)               when a <  p.
/// Requires alpha in (0,1), p > 0; the result lies in (0,1).
double compute_psi(double alpha, double p);

/// Infinitesimal transition time |ln eps| * eps^{2(1-alpha)/(1+alpha)}.
double infinitesimal_time(double epsilon, double alpha);

/// t_star(c) = inf{ t : ((1-psi) c t)^{1/(1-psi)} >= 1/2 } clamped to <= 1.
double escape_t_star(double c, double psi);

/// Per-path summary sufficient to evaluate the escape-rate indicator
///   V_t >= ((1-psi) c (t - t_eps)_+)^{1/(1-psi)}  on [t_eps, min(t_star(c), horizon)]
/// at any c: env_min[k] = min over all steps with t in (t_eps, grid[k]] of
/// V_t^{1-psi} / ((1-psi)(t - t_eps)).
struct EscapeEnvelope {
  double t_eps = 0.0;
  double horizon = 0.0;
  std::vector<double> grid;
  std::vector<double> env_min;

  bool satisfied(double c, double psi) const;
  static EscapeEnvelope from_series(const std::vector<double>& times,
                                    const std::vector<double>& values, double t_eps,
                                    double psi);
};

/// Largest c whose indicator is satisfied by >= 95% of the input paths,
/// located by bisection on [1e-6, 1e3].  Throws FitFailure when even
/// c = 1e-6 fails, DomainError when fewer than 50 paths are supplied.
double fit_escape_constant(const std::vector<EscapeEnvelope>& paths, double psi);

struct EnsembleOptions {
  double direction_r = 0.08 * M_PI;  // Thm 2.2 radius r
  double epsilon_window = 0.2;       // Thm 2.2 time window end
  double mu = 0.05;                  // g-positivity level at tau
  double p_exponent = 1.0;           // p entering psi
  double record_dt = 2e-3;           // sample spacing of the stored series
  int histogram_bins = 24;
  const CriticalSets* critical = nullptr;  // required for direction stats
  bool keep_records = false;
  int keep_first = 12;
};

struct EpsilonStats {
  double epsilon = 0.0;
  double t_eps = 0.0;
  int n_paths = 0;
  int n_exited = 0;
  int n_failed_exit = 0;
  int n_anomalies = 0;
  int n_tau_hit = 0;
  std::vector<double> exit_angles;  // 2D only
  std::vector<int> exit_histogram;  // bins over (-pi, pi]
  double p_direction = 0.0;    // exited paths keeping dist(theta, S) <= r on [t_eps, eps_window]
  double p_escape_rate = 0.0;  // exited paths satisfying the bound at the fitted c
  double p_g_positive = 0.0;   // tau hits with g(X_tau) > mu
  std::array<double, 5> tau_quantiles{};         // 10/25/50/75/90%
  std::array<double, 5> tau_scaled_quantiles{};  // tau / eps^{2(1-alpha)/(1+alpha)}
  double median_block_deviation = 0.0;
  int n_blocks = 0;
};

struct EnsembleStats {
  double psi = 0.0;
  bool fit_ok = false;
  double c_fit = 0.0;
  double t_star = 0.0;
  std::vector<EpsilonStats> per_epsilon;
  // Decimated records kept for plotting when requested (not serialized).
  std::vector<std::vector<PathRecord>> kept_records;

  std::string to_json() const;
};

/// Simulate n_paths independent paths per epsilon and aggregate the
/// theorem-check statistics.  Path i uses the stream (seed, i); workers only
/// change scheduling, never results.
EnsembleStats run_ensemble(const PotentialModel& model, const SimConfig& base,
                           const std::vector<double>& epsilons, int n_paths, int workers,
                           const EnsembleOptions& options = {});

}  // namespace zeronoise

#endif
