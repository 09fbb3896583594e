#include "zeronoise/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "zeronoise/errors.hpp"

namespace zeronoise {

namespace {

constexpr double kLapTol = 1e-9;       // absorbs FD noise in Delta V >= 0
constexpr double kSpreadLimit = 50.0;  // admissible max/min ratio in the A4/B1 sandwiches
constexpr double kSafety = 1.1;        // 10% margin on extremal-ratio estimates

struct Sample {
  Vec x;
  Vec u;
  double r = 0.0;
  double g = 0.0;
  double L = 0.0;
  double V = 0.0;
  double grad_norm = 0.0;
  double grad_radial = 0.0;
  double lap = 0.0;
  double hess_norm = 0.0;
};

// Spectral norm of the 2D Hessian assembled in the polar frame.
double hess_norm_2d(const PotentialModel& model, double th, double r) {
  const auto& gp = static_cast<const PlanarProfile&>(model.profile());
  double a = model.exponents().alpha;
  auto frame_norm = [](double m00, double m01, double m11) {
    double mean = 0.5 * (m00 + m11);
    double disc = std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + m01 * m01);
    return std::max(std::fabs(mean + disc), std::fabs(mean - disc));
  };
  double g = gp.g(th), dg = gp.dg(th), ddg = gp.ddg(th);
  double n = frame_norm((1.0 + a) * a * g, a * dg, ddg + (1.0 + a) * g) * std::pow(r, a - 1.0);
  if (const AngularProfile* hprof = model.h_profile()) {
    const auto& hp = static_cast<const PlanarProfile&>(*hprof);
    double b = model.exponents().beta;
    n += frame_norm((1.0 + b) * b * hp.g(th), b * hp.dg(th), hp.ddg(th) + (1.0 + b) * hp.g(th)) *
         std::pow(r, b - 1.0);
  }
  return n;
}

std::vector<Sample> build_samples(const PotentialModel& model, const GridSpec& grid) {
  if (!(grid.r_min > 0.0 && grid.r_min < grid.r_max))
    throw ConfigError("grid: need 0 < r_min < r_max");
  if (grid.n_radii < 2 || grid.n_angles < 8) throw ConfigError("grid: too few samples");

  const int d = model.dimension();
  std::vector<Vec> dirs;
  if (d == 2) {
    dirs.reserve(grid.n_angles);
    for (int i = 0; i < grid.n_angles; ++i) {
      double th = -M_PI + 2.0 * M_PI * (i + 0.5) / grid.n_angles;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    dirs = sphere_sample(d, grid.n_angles);
  }

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(grid.n_radii) * dirs.size());
  double log_lo = std::log(grid.r_min), log_hi = std::log(grid.r_max);
  Vec gradbuf(d);
  bool planar = model.profile().is_planar();
  for (int ir = 0; ir < grid.n_radii; ++ir) {
    double r = std::exp(log_lo + (log_hi - log_lo) * ir / (grid.n_radii - 1.0));
    for (const auto& u : dirs) {
      Sample s;
      s.u = u;
      s.r = r;
      s.x.resize(d);
      for (int i = 0; i < d; ++i) s.x[i] = r * u[i];
      s.g = model.profile().value(u.data());
      s.L = model.profile().boundary_rate(u.data());
      s.V = model.value(s.x.data(), d);
      model.gradient(s.x.data(), d, gradbuf.data());
      s.grad_norm = norm(gradbuf);
      s.grad_radial = dot(gradbuf, u);
      s.lap = model.laplacian(s.x.data(), d);
      s.hess_norm = planar && d == 2 ? hess_norm_2d(model, std::atan2(u[1], u[0]), r)
                                     : std::fabs(s.lap);
      samples.push_back(std::move(s));
    }
  }
  bool any_support = std::any_of(samples.begin(), samples.end(),
                                 [](const Sample& s) { return s.g > 0.0; });
  if (!any_support) throw ConfigError("grid: no sample falls in the support of g");
  return samples;
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= x.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

Witness make_witness(const Sample& s, double value, double bound, double margin,
                     std::string detail) {
  Witness w;
  w.x = s.x;
  w.value = value;
  w.bound = bound;
  w.margin = margin;
  w.detail = std::move(detail);
  return w;
}

// Growth-bound check: ratio = value(x)/r^expo must stay bounded as r -> 0.
// The constant is estimated as the extremal sampled ratio; the verdict tracks
// the trend of the per-radius maximum (a negative log-log slope means the
// "constant" grows toward the origin).
CheckResult ratio_bound_check(const std::string& id, const std::string& assumption,
                              const std::vector<Sample>& samples,
                              const std::function<double(const Sample&)>& quantity,
                              double expo, double* c_estimate) {
  CheckResult res;
  res.id = id;
  res.assumption = assumption;

  std::map<double, double> per_radius_max;
  double best = -std::numeric_limits<double>::infinity();
  const Sample* best_sample = nullptr;
  for (const auto& s : samples) {
    double ratio = quantity(s) / std::pow(s.r, expo);
    if (!std::isfinite(ratio)) {
      res.verdict = Verdict::Fail;
      res.margin = -std::numeric_limits<double>::infinity();
      res.witnesses.push_back(make_witness(s, ratio, 0.0, res.margin, "non-finite ratio"));
      return res;
    }
    auto [it, fresh] = per_radius_max.try_emplace(s.r, ratio);
    if (!fresh) it->second = std::max(it->second, ratio);
    if (ratio > best) {
      best = ratio;
      best_sample = &s;
    }
  }
  std::vector<double> lx, ly;
  for (const auto& [r, m] : per_radius_max) {
    if (m > 0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(m));
    }
  }
  double slope = ls_slope(lx, ly);
  double chat = kSafety * std::max(best, 0.0);
  if (c_estimate) *c_estimate = chat;
  // Stable toward the origin: the per-radius maximum must not grow as r -> 0.
  res.margin = slope + 0.05;
  res.verdict = res.margin >= 0.0 ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "max ratio " << best << ", estimate " << chat << ", log-log slope " << slope;
  res.note = note.str();
  if (best_sample)
    res.witnesses.push_back(
        make_witness(*best_sample, best, chat, chat - best, "extremal ratio sample"));
  return res;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "unchecked";
  }
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return false;
  return true;
}

const CheckResult* ValidationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

namespace {

// Shared scan state for A and B checks.
struct ScanContext {
  std::vector<Sample> samples;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 1.0;
  bool p_fitted = false;
  double max_g = 0.0;
  double a0 = 0.0;       // positivity level (0 when the search failed)
  bool a0_found = false;
};

// Bisection for the largest level a0 such that Delta V >= -tol on
// {0 < g < a0}.
void search_a0(const PotentialModel& model, ScanContext& ctx, CheckResult& res) {
  auto region_ok = [&](double a, const Sample** worst) {
    double worst_margin = std::numeric_limits<double>::infinity();
    const Sample* w = nullptr;
    for (const auto& s : ctx.samples) {
      if (!(s.g > 0.0 && s.g < a)) continue;
      double m = s.lap / std::pow(s.r, ctx.alpha - 1.0) + kLapTol;
      if (m < worst_margin) {
        worst_margin = m;
        w = &s;
      }
    }
    if (worst) *worst = w;
    return worst_margin >= 0.0 || w == nullptr;
  };

  double a_hi = 0.999 * ctx.max_g;
  const Sample* worst = nullptr;
  if (region_ok(a_hi, &worst)) {
    ctx.a0 = a_hi;
    ctx.a0_found = true;
    res.verdict = Verdict::Pass;
    res.margin = 0.0;
    if (worst) {
      double m = worst->lap / std::pow(worst->r, ctx.alpha - 1.0) + kLapTol;
      res.margin = m;
      res.witnesses.push_back(make_witness(*worst, m - kLapTol, -kLapTol, m, "worst sample"));
      res.note = "positivity holds on {0 < g < " + std::to_string(a_hi) + "}";
    } else {
      res.note = "vacuous: no sample with 0 < g < " + std::to_string(a_hi) +
                 " (g does not vanish)";
    }
    return;
  }
  double lo = 1e-4, hi = a_hi;
  if (!region_ok(lo, nullptr)) {
    res.verdict = Verdict::Fail;
    const Sample* w = nullptr;
    region_ok(lo, &w);
    if (w) {
      double m = w->lap / std::pow(w->r, ctx.alpha - 1.0) + kLapTol;
      res.margin = m;
      res.witnesses.push_back(make_witness(*w, m - kLapTol, -kLapTol, m, "violating sample"));
    }
    res.note = "no admissible a0 >= 1e-4";
    return;
  }
  for (int it = 0; it < 60; ++it) {
    double mid = std::sqrt(lo * hi);
    if (region_ok(mid, nullptr))
      lo = mid;
    else
      hi = mid;
  }
  ctx.a0 = lo;
  ctx.a0_found = true;
  res.verdict = Verdict::Pass;
  res.margin = 0.0;
  res.note = "positivity holds up to a0 = " + std::to_string(lo);
  const Sample* w = nullptr;
  region_ok(lo, &w);
  if (w) {
    double m = w->lap / std::pow(w->r, ctx.alpha - 1.0) + kLapTol;
    res.witnesses.push_back(make_witness(*w, m - kLapTol, -kLapTol, m, "worst sample"));
  }
}

// Two-sided sandwich q in [min, max] with bounded spread on the region
// {0 < g < a0}; detects a mismatched boundary exponent p.
CheckResult sandwich_check(const std::string& id, const std::string& assumption,
                           const ScanContext& ctx,
                           const std::function<double(const Sample&)>& quantity,
                           double l_expo, double r_expo, double* lo_est, double* hi_est) {
  CheckResult res;
  res.id = id;
  res.assumption = assumption;
  const Sample *qmin_s = nullptr, *qmax_s = nullptr;
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = 0.0;
  std::vector<double> lgl, lgq;
  for (const auto& s : ctx.samples) {
    if (!(s.g > 0.0 && s.g < ctx.a0) || s.L <= 0.0) continue;
    double q = quantity(s) / (std::pow(s.L, l_expo) * std::pow(s.r, r_expo));
    if (!std::isfinite(q)) continue;
    if (q < qmin) {
      qmin = q;
      qmin_s = &s;
    }
    if (q > qmax) {
      qmax = q;
      qmax_s = &s;
    }
    lgl.push_back(std::log(s.L));
    lgq.push_back(std::log(std::max(q, 1e-300)));
  }
  if (!qmin_s) {
    res.verdict = Verdict::Pass;
    res.margin = 0.0;
    res.note = "vacuous: region {0 < g < a0} is empty on the grid";
    return res;
  }
  double slope = ls_slope(lgl, lgq);
  if (lo_est) *lo_est = qmin / kSafety;
  if (hi_est) *hi_est = qmax * kSafety;
  double required_min = qmax / kSpreadLimit;
  res.margin = qmin - required_min;
  res.verdict = (qmin > 0.0 && res.margin >= 0.0) ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "ratio range [" << qmin << ", " << qmax << "], log-log slope vs L " << slope;
  res.note = note.str();
  res.witnesses.push_back(
      make_witness(*qmin_s, qmin, required_min, qmin - required_min, "lower"));
  res.witnesses.push_back(make_witness(*qmax_s, qmax, qmax * kSafety, qmax * (kSafety - 1.0),
                                       "upper"));
  return res;
}

ScanContext make_context(const PotentialModel& model, const GridSpec& grid) {
  ScanContext ctx;
  ctx.samples = build_samples(model, grid);
  ctx.alpha = model.exponents().alpha;
  ctx.beta = model.exponents().beta;
  ctx.p = model.profile().rate_exponent();
  ctx.max_g = 0.0;
  for (const auto& s : ctx.samples) ctx.max_g = std::max(ctx.max_g, s.g);

  if (!model.profile().rate_declared()) {
    // Fit p from log V ~ (p+1) log L + const near the boundary.
    std::vector<double> lx, ly;
    double cutoff = 0.5 * ctx.max_g;
    for (const auto& s : ctx.samples) {
      if (!(s.g > 0.0 && s.g < cutoff) || s.L <= 0.0 || s.V <= 0.0) continue;
      lx.push_back(std::log(s.L));
      ly.push_back(std::log(s.V / std::pow(s.r, 1.0 + ctx.alpha)));
    }
    if (lx.size() >= 8) {
      ctx.p = std::max(ls_slope(lx, ly) - 1.0, 0.1);
      ctx.p_fitted = true;
    }
  }
  return ctx;
}

}  // namespace

ValidationReport check_assumption_A(const PotentialModel& model, const GridSpec& grid) {
  ValidationReport rep;
  rep.model_name = model.profile().name();
  rep.dimension = model.dimension();
  rep.grid = grid;
  ScanContext ctx = make_context(model, grid);
  rep.constants.fitted_p = ctx.p;
  rep.constants.p_was_fitted = ctx.p_fitted;

  // A1: structural writing (V(0) = 0, g >= 0, disjoint supports).
  {
    CheckResult res;
    res.id = "A1.writing";
    res.assumption = "A1";
    Vec zero(model.dimension(), 0.0);
    double v0 = model.value(zero);
    double worst_g = 0.0;
    const Sample* worst = nullptr;
    bool disjoint = true;
    const Sample* overlap = nullptr;
    for (const auto& s : ctx.samples) {
      if (s.g < worst_g) {
        worst_g = s.g;
        worst = &s;
      }
      if (model.h_profile() && s.g != 0.0 &&
          model.h_profile()->value(s.u.data()) != 0.0) {
        disjoint = false;
        overlap = &s;
      }
    }
    res.margin = std::min(worst_g, v0 == 0.0 ? 0.0 : -std::fabs(v0));
    res.verdict = (v0 == 0.0 && worst_g >= 0.0 && disjoint) ? Verdict::Pass : Verdict::Fail;
    if (worst) res.witnesses.push_back(make_witness(*worst, worst_g, 0.0, worst_g, "min g"));
    if (!disjoint && overlap)
      res.witnesses.push_back(make_witness(*overlap, overlap->g, 0.0, -1.0, "supports overlap"));
    res.note = "V(0) = " + std::to_string(v0);
    rep.checks.push_back(std::move(res));
  }

  // A2: |grad V| <= C0 |x|^alpha.
  double c_grad = 0.0;
  rep.checks.push_back(ratio_bound_check(
      "A2.gradient-bound", "A2", ctx.samples,
      [](const Sample& s) { return s.grad_norm; }, ctx.alpha, &c_grad));

  // A2: grad V . x/|x| >= -C0 |x|^beta.
  double c_radial = 0.0;
  rep.checks.push_back(ratio_bound_check(
      "A2.radial-lower", "A2", ctx.samples,
      [](const Sample& s) { return std::max(-s.grad_radial, 0.0); }, ctx.beta, &c_radial));

  // A2: |hess V| <= C0 |x|^{alpha-1}.
  double c_hess = 0.0;
  {
    auto res = ratio_bound_check(
        "A2.hessian-bound", "A2", ctx.samples,
        [](const Sample& s) { return s.hess_norm; }, ctx.alpha - 1.0, &c_hess);
    if (model.dimension() > 2) res.note += " (Laplacian proxy)";
    rep.checks.push_back(std::move(res));
  }
  rep.constants.C0 = std::max({c_grad, c_radial, c_hess});

  // A2: Delta V >= 0 on {0 < g < a0}.
  {
    CheckResult res;
    res.id = "A2.laplacian-positivity";
    res.assumption = "A2";
    search_a0(model, ctx, res);
    rep.constants.a0 = ctx.a0;
    rep.checks.push_back(std::move(res));
  }

  // A3: cone with inf g >= c0.
  {
    CheckResult res;
    res.id = "A3.cone";
    res.assumption = "A3";
    double c0 = 0.5 * ctx.max_g;
    rep.constants.c0 = c0;
    if (ctx.max_g <= 0.0) {
      res.verdict = Verdict::Fail;
      res.note = "g vanishes identically on the grid";
      rep.checks.push_back(std::move(res));
    } else if (model.dimension() == 2) {
      // Longest contiguous angular arc with g >= c0 (one radius suffices:
      // the profile is angular).
      const auto& gp = static_cast<const PlanarProfile&>(model.profile());
      int n = grid.n_angles;
      std::vector<bool> ok(n);
      for (int i = 0; i < n; ++i) {
        double th = -M_PI + 2.0 * M_PI * (i + 0.5) / n;
        ok[i] = gp.g(th) >= c0;
      }
      int best_len = 0, best_start = 0, cur_len = 0, cur_start = 0;
      for (int i = 0; i < 2 * n; ++i) {
        if (ok[i % n]) {
          if (cur_len == 0) cur_start = i;
          if (++cur_len > best_len) {
            best_len = cur_len;
            best_start = cur_start;
          }
          if (cur_len == 2 * n) break;
        } else {
          cur_len = 0;
        }
      }
      if (best_len == 0) {
        res.verdict = Verdict::Fail;
        res.margin = -c0;
        res.note = "no direction reaches the cone level";
      } else {
        best_len = std::min(best_len, n);
        double width = 2.0 * M_PI * best_len / n;
        double center = wrap_angle(-M_PI + 2.0 * M_PI * (best_start + 0.5 * best_len) / n);
        rep.constants.cone_center = center;
        rep.constants.cone_half_angle = 0.5 * width;
        res.verdict = Verdict::Pass;
        double gc = gp.g(center);
        res.margin = gc - c0;
        Sample s;
        s.x = {std::cos(center), std::sin(center)};
        s.u = s.x;
        s.r = 1.0;
        res.witnesses.push_back(make_witness(s, gc, c0, gc - c0, "cone center"));
        std::ostringstream note;
        note << "cone center " << center << ", half-angle " << 0.5 * width;
        res.note = note.str();
      }
      rep.checks.push_back(std::move(res));
    } else {
      const Sample* best = nullptr;
      for (const auto& s : ctx.samples)
        if (!best || s.g > best->g) best = &s;
      rep.constants.cone_direction = best->u;
      double half = M_PI;
      for (const auto& s : ctx.samples)
        if (s.g < c0) half = std::min(half, sphere_dist(s.u, best->u));
      rep.constants.cone_half_angle = half;
      res.verdict = half > 0.0 ? Verdict::Pass : Verdict::Fail;
      res.margin = best->g - c0;
      res.witnesses.push_back(make_witness(*best, best->g, c0, best->g - c0, "cone center"));
      std::ostringstream note;
      note << "empirical half-angle " << half;
      res.note = note.str();
      rep.checks.push_back(std::move(res));
    }
  }

  // A3: |grad V| >= c0 V / |x| on {g > 0}.
  {
    CheckResult res;
    res.id = "A3.gradient-lower";
    res.assumption = "A3";
    double m = std::numeric_limits<double>::infinity();
    const Sample* worst = nullptr;
    for (const auto& s : ctx.samples) {
      if (!(s.g > 0.0 && s.V > 0.0)) continue;
      double ratio = s.grad_norm * s.r / s.V;
      if (ratio < m) {
        m = ratio;
        worst = &s;
      }
    }
    if (!worst) {
      res.verdict = Verdict::Fail;
      res.note = "no sample with g > 0";
    } else {
      rep.constants.c0_grad_ratio = m / kSafety;
      res.margin = m;
      res.verdict = m > 0.0 ? Verdict::Pass : Verdict::Fail;
      res.witnesses.push_back(make_witness(*worst, m, 0.0, m, "min |grad V| |x| / V"));
      res.note = "min ratio " + std::to_string(m);
    }
    rep.checks.push_back(std::move(res));
  }

  // A4: boundary-rate sandwich for V and |grad V|.
  {
    double lo = 0, hi = 0;
    auto res = sandwich_check("A4.sandwich-V", "A4", ctx,
                              [](const Sample& s) { return s.V; }, ctx.p + 1.0,
                              1.0 + ctx.alpha, &lo, &hi);
    if (ctx.p_fitted) res.note += " (p fitted: " + std::to_string(ctx.p) + ")";
    rep.checks.push_back(std::move(res));
    auto res2 = sandwich_check("A4.sandwich-grad", "A4", ctx,
                               [](const Sample& s) { return s.grad_norm; }, ctx.p,
                               ctx.alpha, nullptr, nullptr);
    rep.checks.push_back(std::move(res2));
  }

  // Critical-set summary (delegated to the flow scan).
  try {
    CriticalSets sets = find_critical_sets(model.profile(), std::max(1024, grid.n_angles));
    CriticalSummary cs;
    cs.n_maxima = static_cast<int>(sets.maxima.size());
    cs.n_minima = static_cast<int>(sets.minima.size());
    cs.degenerate = sets.degenerate;
    if (model.dimension() == 2)
      for (const auto& m : sets.maxima) cs.maxima_angles.push_back(0.5 * (m.lo + m.hi));
    rep.critical = cs;
  } catch (const ConfigError&) {
  }
  return rep;
}

ValidationReport check_assumption_B(const PotentialModel& model, const GridSpec& grid) {
  ValidationReport rep;
  rep.model_name = model.profile().name();
  rep.dimension = model.dimension();
  rep.grid = grid;
  ScanContext ctx = make_context(model, grid);
  rep.constants.fitted_p = ctx.p;
  rep.constants.p_was_fitted = ctx.p_fitted;

  // The Laplacian-positivity level also delimits the B1 region.
  {
    CheckResult tmp;
    search_a0(model, ctx, tmp);
    rep.constants.a0 = ctx.a0;
  }

  // B1: |hess V| <= C0 L^{p-1} |x|^{alpha-1} on {0 < g < a0}; an upper bound
  // only, so the verdict keys on the stability of the extremal ratio.
  {
    if (ctx.p >= 1.0) {
      auto res = ratio_bound_check(
          "B1.hessian-rate", "B1", ctx.samples,
          [&](const Sample& s) {
            if (!(s.g > 0.0 && s.g < ctx.a0) || s.L <= 0.0) return 0.0;
            return s.hess_norm / std::pow(s.L, ctx.p - 1.0);
          },
          ctx.alpha - 1.0, nullptr);
      if (model.dimension() > 2) res.note += " (Laplacian proxy)";
      rep.checks.push_back(std::move(res));
    } else {
      CheckResult res;
      res.id = "B1.hessian-rate";
      res.assumption = "B1";
      res.verdict = Verdict::Unchecked;
      res.note = "declared p < 1; B1 does not apply";
      rep.checks.push_back(std::move(res));
    }
  }

  // B2: residuals eta, eta' with sup |.|/|x| finite.
  {
    CheckResult res;
    res.id = "B2.residual";
    res.assumption = "B2";
    int d = model.dimension();
    Vec gradbuf(d), sgrad(d);
    double sup_eta = 0.0, sup_etap = 0.0;
    for (const auto& s : ctx.samples) {
      if (!(s.g > 0.0)) continue;
      double theta_u = model.profile().value(s.u.data());
      sup_eta = std::max(sup_eta, std::fabs(s.g - theta_u) / s.r);
      model.gradient(s.x.data(), d, gradbuf.data());
      model.profile().euclid_grad(s.u.data(), sgrad.data());
      double ue = dot(s.u, sgrad);
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        double tang = gradbuf[i] - s.grad_radial * s.u[i];
        double expected = (sgrad[i] - ue * s.u[i]) * std::pow(s.r, ctx.alpha);
        double diff = tang - expected;
        acc += diff * diff;
      }
      sup_etap = std::max(sup_etap, std::sqrt(acc) / std::pow(s.r, ctx.alpha) / s.r);
    }
    res.verdict = (std::isfinite(sup_eta) && std::isfinite(sup_etap)) ? Verdict::Pass
                                                                      : Verdict::Fail;
    res.margin = 0.0;
    std::ostringstream note;
    note << "sup |eta|/|x| = " << sup_eta << ", sup |eta'|/|x| = " << sup_etap;
    res.note = note.str();
    rep.checks.push_back(std::move(res));
  }

  CriticalSets sets = find_critical_sets(model.profile(), std::max(1024, grid.n_angles));
  {
    CriticalSummary cs;
    cs.n_maxima = static_cast<int>(sets.maxima.size());
    cs.n_minima = static_cast<int>(sets.minima.size());
    cs.degenerate = sets.degenerate;
    if (model.dimension() == 2)
      for (const auto& m : sets.maxima) cs.maxima_angles.push_back(0.5 * (m.lo + m.hi));
    rep.critical = cs;
  }

  // B4: uniformly convex wells around each interior minimum.
  {
    CheckResult res;
    res.id = "B4.well-convexity";
    res.assumption = "B4";
    if (sets.degenerate) {
      res.verdict = Verdict::Unchecked;
      res.note = "degenerate: Theta constant";
    } else if (sets.minima.empty()) {
      res.verdict = Verdict::Pass;
      res.note = "vacuous: no interior local minima";
    } else {
      double worst_hess = std::numeric_limits<double>::infinity();
      double worst_grad = std::numeric_limits<double>::infinity();
      Vec worst_point;
      for (const auto& w : sets.minima) {
        if (!(w.radius > 0.0)) {
          worst_hess = -1.0;
          worst_point = w.center;
          continue;
        }
        const int n_probe = 64;
        for (int i = 0; i <= n_probe; ++i) {
          double off = -w.radius + 2.0 * w.radius * i / n_probe;
          Vec u;
          if (model.dimension() == 2) {
            double th = w.angle + off;
            u = {std::cos(th), std::sin(th)};
          } else {
            continue;  // handled via the well radius probe in find_critical_sets
          }
          Mat H = hess_sphere_theta(model.profile(), u);
          // Tangent direction in 2D.
          Vec tan = {-u[1], u[0]};
          double q = 0.0;
          for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) q += tan[r] * H(r, c) * tan[c];
          if (q < worst_hess) {
            worst_hess = q;
            worst_point = u;
          }
          double th_val = model.profile().value(u.data());
          double gap = th_val - w.theta_min;
          if (gap > 1e-12) {
            Vec sg = grad_sphere_theta(model.profile(), u);
            double ratio = dot(sg, sg) / gap;
            worst_grad = std::min(worst_grad, ratio);
          }
        }
      }
      res.margin = std::min(worst_hess, worst_grad);
      res.verdict = (worst_hess > 0.0 && worst_grad > 0.0) ? Verdict::Pass : Verdict::Fail;
      Sample s;
      s.x = worst_point;
      s.u = worst_point;
      s.r = 1.0;
      res.witnesses.push_back(
          make_witness(s, worst_hess, 0.0, worst_hess, "min tangent Hessian form"));
      std::ostringstream note;
      note << sets.minima.size() << " well(s); c >= " << worst_hess << ", c' >= " << worst_grad;
      res.note = note.str();
    }
    rep.checks.push_back(std::move(res));
  }

  // B3: basin attraction, reported empirically (not certified).
  {
    CheckResult res;
    res.id = "B3.basins";
    res.assumption = "B3";
    res.verdict = Verdict::Unchecked;
    if (sets.degenerate || sets.maxima.empty()) {
      res.note = "no attraction scan: degenerate profile or empty S";
    } else if (model.dimension() == 2) {
      const auto& gp = static_cast<const PlanarProfile&>(model.profile());
      std::vector<Vec> starts;
      int n = 64;
      double lo = gp.theta0(), hi = gp.theta1();
      for (int i = 0; i < n; ++i) {
        double th = lo + (hi - lo) * (i + 0.5) / n;
        if (gp.g(th) < grid.basin_a) continue;
        bool in_well = false;
        for (const auto& w : sets.minima)
          if (angle_dist(th, w.angle) < w.radius && gp.g(th) < w.level) in_well = true;
        if (in_well) continue;
        starts.push_back({std::cos(th), std::sin(th)});
      }
      double t0 = attraction_time(model.profile(), starts, grid.basin_r, sets, 1e-3, 1e3);
      std::ostringstream note;
      note << "empirical T0(r = " << grid.basin_r << ") = " << t0 << " over " << starts.size()
           << " starts";
      res.note = note.str();
    } else {
      res.note = "empirical basin scan implemented for d = 2 only";
    }
    rep.checks.push_back(std::move(res));
  }
  return rep;
}

double recheck_witness(const PotentialModel& model, const ValidationReport& report,
                       const CheckResult& check, const Witness& witness) {
  const Vec& x = witness.x;
  int d = model.dimension();
  double r = norm(x);
  Vec u(d);
  for (int i = 0; i < d; ++i) u[i] = r > 0 ? x[i] / r : 0.0;
  double alpha = model.exponents().alpha;
  Vec grad(d);
  model.gradient(x.data(), d, grad.data());

  if (check.id == "A2.laplacian-positivity")
    return model.laplacian(x) / std::pow(r, alpha - 1.0) + kLapTol;
  if (check.id == "A2.gradient-bound")
    return witness.bound - norm(grad) / std::pow(r, alpha);
  if (check.id == "A2.radial-lower")
    return witness.bound - std::max(-dot(grad, u), 0.0) / std::pow(r, model.exponents().beta);
  if (check.id == "A3.cone") return model.profile().value(u.data()) - witness.bound;
  if (check.id == "A3.gradient-lower") {
    double v = model.value(x.data(), d);
    return norm(grad) * r / v;
  }
  if (check.id == "A4.sandwich-V" || check.id == "A4.sandwich-grad") {
    double p = report.constants.fitted_p;
    double L = model.profile().boundary_rate(u.data());
    double q;
    if (check.id == "A4.sandwich-V")
      q = model.value(x.data(), d) / (std::pow(L, p + 1.0) * std::pow(r, 1.0 + alpha));
    else
      q = norm(grad) / (std::pow(L, p) * std::pow(r, alpha));
    return witness.detail == "lower" ? q - witness.bound : witness.bound - q;
  }
  if (check.id == "B4.well-convexity") {
    Mat H = hess_sphere_theta(model.profile(), u);
    Vec tan = {-u[1], u[0]};
    double q = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q += tan[i] * H(i, j) * tan[j];
    return q;
  }
  return witness.margin;  // structural checks: nothing pointwise to redo
}

std::vector<std::pair<double, double>> boundary_laplacian_scan(const PotentialModel& model,
                                                               int n_angles) {
  if (model.dimension() != 2 || !model.profile().is_planar())
    throw DimensionError("boundary_laplacian_scan: 2D models only");
  if (n_angles < 2) throw ConfigError("boundary_laplacian_scan: need at least 2 angles");
  const auto& gp = static_cast<const PlanarProfile&>(model.profile());
  double lo = gp.theta0(), hi = gp.theta1();
  double a = model.exponents().alpha;
  std::vector<std::pair<double, double>> out;
  out.reserve(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    double th = lo + (hi - lo) * i / (n_angles - 1.0);
    out.emplace_back(th, (1.0 + a) * (1.0 + a) * gp.g(th) + gp.ddg(th));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model_name;
  j["dimension"] = dimension;
  j["grid"] = {{"r_min", grid.r_min},
               {"r_max", grid.r_max},
               {"n_radii", grid.n_radii},
               {"n_angles", grid.n_angles}};
  j["all_pass"] = all_pass();
  j["constants"] = {{"C0", constants.C0},
                    {"c0", constants.c0},
                    {"c0_grad_ratio", constants.c0_grad_ratio},
                    {"a0", constants.a0},
                    {"cone_center", constants.cone_center},
                    {"cone_half_angle", constants.cone_half_angle},
                    {"p", constants.fitted_p},
                    {"p_was_fitted", constants.p_was_fitted}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["assumption"] = c.assumption;
    jc["verdict"] = to_string(c.verdict);
    jc["margin"] = c.margin;
    jc["note"] = c.note;
    jc["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : c.witnesses) {
      nlohmann::ordered_json jw;
      jw["x"] = w.x;
      jw["value"] = w.value;
      jw["bound"] = w.bound;
      jw["margin"] = w.margin;
      jw["detail"] = w.detail;
      jc["witnesses"].push_back(std::move(jw));
    }
    j["checks"].push_back(std::move(jc));
  }
  if (critical) {
    j["critical"] = {{"n_maxima", critical->n_maxima},
                     {"n_minima", critical->n_minima},
                     {"degenerate", critical->degenerate},
                     {"maxima_angles", critical->maxima_angles}};
  }
  return j.dump(2);
}

std::string ValidationReport::witnesses_csv() const {
  std::ostringstream out;
  out << "check_id,assumption,verdict,margin,value,bound";
  int d = dimension;
  for (int i = 1; i <= d; ++i) out << ",x" << i;
  out << ",detail\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& c : checks) {
    for (const auto& w : c.witnesses) {
      out << c.id << ',' << c.assumption << ',' << to_string(c.verdict) << ','
          << num(c.margin) << ',' << num(w.value) << ',' << num(w.bound);
      for (int i = 0; i < d; ++i)
        out << ',' << num(i < static_cast<int>(w.x.size()) ? w.x[i] : 0.0);
      out << ',' << w.detail << '\n';
    }
  }
  return out.str();
}

}  // namespace zeronoise
