#include "zeronoise/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "zeronoise/errors.hpp"
#include "zeronoise/rng.hpp"

namespace zeronoise {

double compute_psi(double alpha, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("psi: alpha must lie in (0, 1)");
  if (!(p > 0.0)) throw DomainError("psi: p must be positive");
  double psi = alpha >= p ? 2.0 * alpha / (1.0 + alpha) + (1.0 - alpha) * p / (p + 1.0)
                          : (alpha + p) / (p + 1.0);
  if (!(psi > 0.0 && psi < 1.0)) throw DomainError("psi: computed value escaped (0, 1)");
  return psi;
}

double infinitesimal_time(double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("t_eps: epsilon must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("t_eps: alpha must lie in (0, 1)");
  return std::fabs(std::log(epsilon)) * std::pow(epsilon, 2.0 * (1.0 - alpha) / (1.0 + alpha));
}

double escape_t_star(double c, double psi) {
  // ((1-psi) c t)^{1/(1-psi)} = 1/2  <=>  t = 2^{psi-1} / ((1-psi) c).
  double t = std::pow(2.0, psi - 1.0) / ((1.0 - psi) * c);
  return std::min(t, 1.0);
}

bool EscapeEnvelope::satisfied(double c, double psi) const {
  double t_end = std::min(escape_t_star(c, psi), horizon);
  if (t_end <= t_eps || grid.empty()) return true;  // empty window
  // Last grid point inside the window.
  auto it = std::upper_bound(grid.begin(), grid.end(), t_end);
  if (it == grid.begin()) return true;
  std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
  return env_min[k] >= c;
}

EscapeEnvelope EscapeEnvelope::from_series(const std::vector<double>& times,
                                           const std::vector<double>& values, double t_eps,
                                           double psi) {
  EscapeEnvelope env;
  env.t_eps = t_eps;
  env.horizon = times.empty() ? t_eps : times.back();
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    if (t <= t_eps) continue;
    double v = std::max(values[i], 0.0);
    double cand = std::pow(v, 1.0 - psi) / ((1.0 - psi) * (t - t_eps));
    running = std::min(running, cand);
    env.grid.push_back(t);
    env.env_min.push_back(running);
  }
  return env;
}

double fit_escape_constant(const std::vector<EscapeEnvelope>& paths, double psi) {
  if (paths.size() < 50) throw DomainError("fit_escape_constant: need >= 50 paths");
  auto fraction = [&](double c) {
    std::size_t ok = 0;
    for (const auto& p : paths) ok += p.satisfied(c, psi) ? 1 : 0;
    return static_cast<double>(ok) / paths.size();
  };
  const double c_min = 1e-6, c_max = 1e3, target = 0.95;
  if (fraction(c_min) < target)
    throw FitFailure("fit_escape_constant: fraction below 95% even at c = 1e-6");
  // Largest c of the feasible region attached to c_min: scan up for the first
  // failing level, then bisect the boundary.
  double lo = c_min, hi = c_min;
  bool found_fail = false;
  while (hi < c_max) {
    hi = std::min(hi * 2.0, c_max);
    if (fraction(hi) < target) {
      found_fail = true;
      break;
    }
    lo = hi;
  }
  if (!found_fail) return c_max;
  for (int it = 0; it < 100 && hi / lo > 1.0 + 1e-12; ++it) {
    double mid = std::sqrt(lo * hi);
    if (fraction(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Ensemble runner

namespace {

struct PathOutcome {
  bool anomaly = false;
  bool exited = false;
  double exit_time = 0.0;
  double exit_angle = 0.0;  // 2D
  bool tau_hit = false;
  double tau = 0.0;
  double g_at_tau = 0.0;
  bool direction_valid = false;  // critical sets available and window non-empty
  bool direction_ok = false;
  EscapeEnvelope envelope;
  std::vector<double> block_deviations;
  PathRecord record;  // only kept when requested
  bool has_record = false;
};

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  double pos = q * (v.size() - 1);
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  double frac = pos - i;
  return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

PathOutcome run_one_path(const PotentialModel& model, SimConfig cfg, double t_eps, double psi,
                         const EnsembleOptions& opt, bool keep_record) {
  PathOutcome out;
  const int d = model.dimension();
  const double dt = cfg.step();
  cfg.record_stride = std::max(1, static_cast<int>(std::llround(opt.record_dt / dt)));

  NormalStream stream(cfg.seed, cfg.path_index);

  bool dir_ok = true;
  bool exited = false;
  double exit_time = 0.0, exit_angle = 0.0;
  double env_running = std::numeric_limits<double>::infinity();
  EscapeEnvelope env;
  env.t_eps = t_eps;
  env.horizon = cfg.t_max;
  const bool have_sets = opt.critical != nullptr && !opt.critical->degenerate &&
                         !opt.critical->maxima.empty();

  auto observer = [&](const StepView& view) {
    if (!exited && view.radius >= cfg.rho_exit) {
      exited = true;
      exit_time = view.t;
      exit_angle = d == 2 ? std::atan2(view.x[1], view.x[0]) : 0.0;
    }
    if (have_sets && view.t >= t_eps && view.t <= opt.epsilon_window) {
      if (view.radius <= 0.0) {
        dir_ok = false;
      } else {
        Vec u(view.unit, view.unit + d);
        if (opt.critical->dist(u) > opt.direction_r) dir_ok = false;
      }
    }
    if (view.t > t_eps) {
      double v = std::max(view.potential, 0.0);
      double cand = std::pow(v, 1.0 - psi) / ((1.0 - psi) * (view.t - t_eps));
      env_running = std::min(env_running, cand);
      if (view.n % static_cast<std::size_t>(cfg.record_stride) == 0) {
        env.grid.push_back(view.t);
        env.env_min.push_back(env_running);
      }
    }
  };

  try {
    auto [rec, st] = simulate_path(
        model, cfg,
        [&stream, d](std::size_t, double* x) {
          for (int i = 0; i < d; ++i) x[i] = stream.next();
        },
        observer);
    out.exited = exited;
    out.exit_time = exit_time;
    out.exit_angle = exit_angle;
    out.tau_hit = st.tau_v0.hit;
    out.tau = st.tau_v0.time;
    out.g_at_tau = st.g_at_tau;
    out.direction_valid = have_sets;
    out.direction_ok = dir_ok;
    out.envelope = std::move(env);
    if (st.zeta.hit) {
      try {
        auto blocks = compare_angle_flow(rec, model.profile(), st.zeta.time, cfg.block_T, cfg.a);
        for (const auto& b : blocks) out.block_deviations.push_back(b.sup_deviation);
      } catch (const EmptyRangeError&) {
      }
    }
    if (keep_record) {
      out.record = std::move(rec);
      out.has_record = true;
    }
  } catch (const NumericalBlowup&) {
    out.anomaly = true;
  }
  return out;
}

}  // namespace

EnsembleStats run_ensemble(const PotentialModel& model, const SimConfig& base,
                           const std::vector<double>& epsilons, int n_paths, int workers,
                           const EnsembleOptions& options) {
  if (epsilons.empty()) throw ConfigError("ensemble: epsilon ladder must be non-empty");
  if (n_paths < 1) throw ConfigError("ensemble: n_paths must be >= 1");
  if (workers < 1) throw ConfigError("ensemble: workers must be >= 1");

  const double alpha = model.exponents().alpha;
  EnsembleStats stats;
  stats.psi = compute_psi(alpha, options.p_exponent);

  std::vector<std::vector<PathOutcome>> outcomes(epsilons.size());
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double eps = epsilons[e];
    const double t_eps = infinitesimal_time(eps, alpha);
    std::vector<PathOutcome>& slot = outcomes[e];
    slot.resize(n_paths);

    std::atomic<int> next{0};
    auto work = [&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n_paths) break;
        SimConfig cfg = base;
        cfg.epsilon = eps;
        cfg.path_index = static_cast<std::uint64_t>(i);
        bool keep = options.keep_records && i < options.keep_first;
        slot[i] = run_one_path(model, cfg, t_eps, stats.psi, options, keep);
      }
    };
    int nw = std::min(workers, n_paths);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Fit the escape constant on the smallest epsilon (exited paths only;
  // failed exits are the remnant of the probability defect and are counted
  // separately).
  std::size_t smallest = 0;
  for (std::size_t e = 1; e < epsilons.size(); ++e)
    if (epsilons[e] < epsilons[smallest]) smallest = e;
  std::vector<EscapeEnvelope> fit_inputs;
  for (const auto& o : outcomes[smallest])
    if (!o.anomaly && o.exited) fit_inputs.push_back(o.envelope);
  stats.fit_ok = false;
  stats.c_fit = std::numeric_limits<double>::quiet_NaN();
  stats.t_star = std::numeric_limits<double>::quiet_NaN();
  try {
    stats.c_fit = fit_escape_constant(fit_inputs, stats.psi);
    stats.t_star = escape_t_star(stats.c_fit, stats.psi);
    stats.fit_ok = true;
  } catch (const FitFailure&) {
  } catch (const DomainError&) {
  }

  stats.kept_records.resize(epsilons.size());
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double eps = epsilons[e];
    EpsilonStats es;
    es.epsilon = eps;
    es.t_eps = infinitesimal_time(eps, alpha);
    es.n_paths = n_paths;
    es.exit_histogram.assign(options.histogram_bins, 0);
    const double scale = std::pow(eps, 2.0 * (1.0 - alpha) / (1.0 + alpha));

    std::vector<double> taus, taus_scaled, devs;
    int n_dir_ok = 0, n_dir_total = 0, n_escape_ok = 0, n_escape_total = 0, n_g_pos = 0;
    for (const auto& o : outcomes[e]) {
      if (o.anomaly) {
        ++es.n_anomalies;
        continue;
      }
      if (o.exited) {
        ++es.n_exited;
        if (model.dimension() == 2) {
          es.exit_angles.push_back(o.exit_angle);
          int bin = static_cast<int>((o.exit_angle + M_PI) / (2.0 * M_PI) *
                                     options.histogram_bins);
          bin = std::clamp(bin, 0, options.histogram_bins - 1);
          ++es.exit_histogram[bin];
        }
        if (o.direction_valid) {
          ++n_dir_total;
          if (o.direction_ok) ++n_dir_ok;
        }
        if (stats.fit_ok) {
          ++n_escape_total;
          if (o.envelope.satisfied(stats.c_fit, stats.psi)) ++n_escape_ok;
        }
      } else {
        ++es.n_failed_exit;
      }
      if (o.tau_hit) {
        ++es.n_tau_hit;
        taus.push_back(o.tau);
        taus_scaled.push_back(o.tau / scale);
        if (o.g_at_tau > options.mu) ++n_g_pos;
      }
      for (double dv : o.block_deviations) devs.push_back(dv);
      if (o.has_record)
        stats.kept_records[e].push_back(o.record);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    es.p_direction = n_dir_total > 0 ? static_cast<double>(n_dir_ok) / n_dir_total : nan;
    es.p_escape_rate =
        n_escape_total > 0 ? static_cast<double>(n_escape_ok) / n_escape_total : nan;
    es.p_g_positive = es.n_tau_hit > 0 ? static_cast<double>(n_g_pos) / es.n_tau_hit : nan;
    const double qs[5] = {0.10, 0.25, 0.50, 0.75, 0.90};
    for (int k = 0; k < 5; ++k) {
      es.tau_quantiles[k] = quantile(taus, qs[k]);
      es.tau_scaled_quantiles[k] = quantile(taus_scaled, qs[k]);
    }
    es.n_blocks = static_cast<int>(devs.size());
    es.median_block_deviation = devs.empty() ? nan : median(devs);
    stats.per_epsilon.push_back(std::move(es));
  }
  return stats;
}

std::string EnsembleStats::to_json() const {
  nlohmann::ordered_json j;
  j["psi"] = psi;
  j["fit_ok"] = fit_ok;
  j["c_fit"] = c_fit;
  j["t_star"] = t_star;
  j["per_epsilon"] = nlohmann::ordered_json::array();
  for (const auto& es : per_epsilon) {
    nlohmann::ordered_json je;
    je["epsilon"] = es.epsilon;
    je["t_eps"] = es.t_eps;
    je["n_paths"] = es.n_paths;
    je["n_exited"] = es.n_exited;
    je["n_failed_exit"] = es.n_failed_exit;
    je["n_anomalies"] = es.n_anomalies;
    je["n_tau_hit"] = es.n_tau_hit;
    je["p_direction"] = es.p_direction;
    je["p_escape_rate"] = es.p_escape_rate;
    je["p_g_positive"] = es.p_g_positive;
    je["tau_quantiles"] = es.tau_quantiles;
    je["tau_scaled_quantiles"] = es.tau_scaled_quantiles;
    je["median_block_deviation"] = es.median_block_deviation;
    je["n_blocks"] = es.n_blocks;
    je["exit_histogram"] = es.exit_histogram;
    je["exit_angles"] = es.exit_angles;
    j["per_epsilon"].push_back(std::move(je));
  }
  return j.dump(2);
}

}  // namespace zeronoise
