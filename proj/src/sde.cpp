#include "zeronoise/sde.hpp"

#include <algorithm>
#include <cmath>

#include "zeronoise/errors.hpp"
#include "zeronoise/rng.hpp"
#include "zeronoise/sphereflow.hpp"

namespace zeronoise {

namespace {
constexpr double kRadiusFloor = 1e-12;
}

void SimConfig::validate() const {
  if (epsilon < 0.0) throw ConfigError("sim: epsilon must be non-negative");
  if (epsilon == 0.0 && dt <= 0.0)
    throw ConfigError("sim: drift-only runs (epsilon = 0) need an explicit dt");
  if (dt < 0.0) throw ConfigError("sim: dt must be non-negative");
  if (!(t_max > 0.0)) throw ConfigError("sim: t_max must be positive");
  if (record_stride < 1) throw ConfigError("sim: record_stride must be >= 1");
  if (v0 < 0.0 || a < 0.0 || delta < 0.0 || rho_exit < 0.0 || block_T <= 0.0)
    throw ConfigError("sim: thresholds must be non-negative and block_T positive");
}

std::pair<PathRecord, StoppingTimes> simulate_path(const PotentialModel& model,
                                                   const SimConfig& config) {
  NormalStream stream(config.seed, config.path_index);
  int d = model.dimension();
  return simulate_path(
      model, config,
      [&stream, d](std::size_t, double* out) {
        for (int i = 0; i < d; ++i) out[i] = stream.next();
      },
      nullptr);
}

std::pair<PathRecord, StoppingTimes> simulate_path(const PotentialModel& model,
                                                   const SimConfig& config,
                                                   const NoiseSupplier& noise,
                                                   const StepObserver& observer) {
  config.validate();
  const int d = model.dimension();
  const double dt = config.step();
  const double eps = config.epsilon;
  const double sqdt = eps * std::sqrt(dt);
  const double alpha = model.exponents().alpha;
  const double beta = model.exponents().beta;
  const std::size_t nstep = static_cast<std::size_t>(std::llround(config.t_max / dt));

  Vec x = config.x0.empty() ? Vec(d, 0.0) : config.x0;
  if (static_cast<int>(x.size()) != d) throw DimensionError("sim: x0 dimension mismatch");
  Vec xi(d);

  PathRecord rec;
  rec.dt = dt;
  StoppingTimes st;
  st.kappa_threshold = eps > 0.0
                           ? std::pow(eps, 2.0 / (1.0 + beta) + (beta - alpha) / 2.0)
                           : 0.0;

  PointEval eval;
  eval.unit.assign(d, 0.0);
  eval.grad.assign(d, 0.0);

  const double v_threshold = config.v0 * eps * eps;
  double sigma = 0.0;
  double prev_integrand = 0.0;
  bool g_seen_positive = false;
  bool tau_anchored = false;
  double v_ref = 0.0;
  bool in_well = false;
  double next_block_sigma = 0.0;
  bool blocks_active = false;

  auto record_sample = [&](double t) {
    rec.times.push_back(t);
    rec.states.push_back(x);
    rec.radius.push_back(eval.radius);
    rec.potential.push_back(eval.potential);
    rec.g_values.push_back(eval.g);
    rec.angles.push_back(eval.unit);
    rec.sigma.push_back(sigma);
  };

  std::size_t n = 0;
  for (;; ++n) {
    const double t = n * dt;
    model.eval_all(x.data(), d, eval, kRadiusFloor);

    // Time change Sigma (trapezoid of R^{alpha-1}, R floored at 1e-12).
    double integrand = std::pow(std::max(eval.radius, kRadiusFloor), alpha - 1.0);
    if (n > 0) sigma += 0.5 * dt * (prev_integrand + integrand);
    prev_integrand = integrand;

    // Online stopping-time detection on the pre-step state.
    if (!st.tau_v0.hit && eval.potential >= v_threshold) {
      st.tau_v0 = {t, true};
      st.g_at_tau = eval.g;
      if (!tau_anchored) {
        tau_anchored = true;
        v_ref = eval.potential;
      }
    }
    if (!st.nu_v0.hit &&
        eval.potential + config.perturbation_eta * std::pow(eval.radius, 1.0 + alpha) >=
            v_threshold)
      st.nu_v0 = {t, true};
    if (!st.kappa.hit && eps > 0.0 && eval.radius >= st.kappa_threshold) st.kappa = {t, true};
    if (eval.g > 0.0) g_seen_positive = true;
    if (!st.gamma.hit && g_seen_positive && eval.g <= 0.0) st.gamma = {t, true};
    if (!st.zeta.hit && eval.g >= 2.0 * config.a) {
      st.zeta = {t, true};
      blocks_active = true;
      next_block_sigma = sigma + config.block_T;
      st.sigma_blocks.push_back(t);
    } else if (blocks_active && sigma >= next_block_sigma) {
      st.sigma_blocks.push_back(t);
      next_block_sigma += config.block_T;
    }
    if (!st.xi_half.hit && tau_anchored && eval.potential <= 0.5 * v_ref)
      st.xi_half = {t, true};
    if (!st.Xi_one.hit && eval.potential >= 1.0) st.Xi_one = {t, true};
    if (!st.rho_delta.hit && eval.radius >= config.delta) st.rho_delta = {t, true};
    if (!st.exit_rho.hit && eval.radius >= config.rho_exit) st.exit_rho = {t, true};
    if (config.well && !st.well_exit.hit && eval.radius >= kRadiusFloor) {
      const WellSpec& w = *config.well;
      bool inside = sphere_dist(eval.unit, w.center) < w.radius && eval.g <= w.level;
      if (in_well && !inside) st.well_exit = {t, true};
      in_well = inside;
    }

    if (observer) {
      StepView view{n,      t,      x.data(),         eval.radius,
                    eval.potential, eval.g, eval.unit.data(), sigma};
      observer(view);
    }
    bool final_step = n == nstep || (config.stop_on_exit && st.exit_rho.hit);
    if (n % static_cast<std::size_t>(config.record_stride) == 0 || final_step)
      record_sample(t);
    if (final_step) break;

    noise(n, xi.data());
    for (int i = 0; i < d; ++i) x[i] += eval.grad[i] * dt + sqdt * xi[i];

    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    if (r2 > config.blowup_radius * config.blowup_radius)
      throw NumericalBlowup("simulate_path: |X| exceeded " +
                            std::to_string(config.blowup_radius));
  }
  return {std::move(rec), std::move(st)};
}

bool detect_failed_exit(const PathRecord& path, const SimConfig& config) {
  for (double r : path.radius)
    if (r >= config.rho_exit) return false;
  return true;
}

std::vector<BlockDeviation> compare_angle_flow(const PathRecord& path,
                                               const AngularProfile& profile, double from,
                                               double block_T, double g_floor) {
  if (path.times.empty()) throw EmptyRangeError("compare_angle_flow: empty path");
  std::size_t i0 = std::lower_bound(path.times.begin(), path.times.end(), from) -
                   path.times.begin();
  if (i0 >= path.times.size())
    throw EmptyRangeError("compare_angle_flow: `from` is past the end of the path");
  if (!(path.g_values[i0] > g_floor))
    throw EmptyRangeError("compare_angle_flow: g <= g_floor at `from`");

  // Truncate at varrho: the first time g drops to g_floor after `from`.
  std::size_t iend = path.times.size();
  for (std::size_t i = i0 + 1; i < path.times.size(); ++i) {
    if (path.g_values[i] <= g_floor) {
      iend = i;
      break;
    }
  }

  const bool planar = profile.is_planar();
  std::vector<BlockDeviation> blocks;
  std::size_t j = i0;
  while (j + 1 < iend) {
    double sigma0 = path.sigma[j];
    std::size_t jn = j + 1;
    while (jn < iend && path.sigma[jn] - sigma0 < block_T) ++jn;
    bool partial = jn >= iend;
    std::size_t last = std::min(jn, iend - 1);

    BlockDeviation b;
    b.start_time = path.times[j];
    b.end_time = path.times[last];
    b.sigma_span = path.sigma[last] - sigma0;
    b.partial = partial;

    // Run the flow under the time change and track the sup of |theta - phi|.
    double sup = 0.0;
    if (planar) {
      const auto& p = static_cast<const PlanarProfile&>(profile);
      double phi = std::atan2(path.angles[j][1], path.angles[j][0]);
      for (std::size_t k = j + 1; k <= last; ++k) {
        double span = path.sigma[k] - path.sigma[k - 1];
        int sub = std::max(1, static_cast<int>(std::ceil(span / 0.02)));
        phi = advance_angle_flow_2d(p, phi, span, sub);
        double dth = angle_dist(std::atan2(path.angles[k][1], path.angles[k][0]), phi);
        sup = std::max(sup, 2.0 * std::sin(0.5 * dth));
      }
    } else {
      Vec phi = path.angles[j];
      for (std::size_t k = j + 1; k <= last; ++k) {
        double span = path.sigma[k] - path.sigma[k - 1];
        int sub = std::max(1, static_cast<int>(std::ceil(span / 0.02)));
        phi = advance_flow(profile, phi, span, sub);
        double acc = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
          double diff = path.angles[k][i] - phi[i];
          acc += diff * diff;
        }
        sup = std::max(sup, std::sqrt(acc));
      }
    }
    b.sup_deviation = sup;
    blocks.push_back(b);
    if (partial) break;
    j = jn;
  }
  return blocks;
}

}  // namespace zeronoise
