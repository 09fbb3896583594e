#include "zeronoise/sphereflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "zeronoise/errors.hpp"
#include "zeronoise/potential.hpp"

namespace zeronoise {

namespace {

constexpr double kRootTol = 1e-10;
constexpr double kPlateauTol = 1e-12;
constexpr double kDegenerateTol = 1e-12;

void check_unit_point(const AngularProfile& profile, const Vec& u) {
  if (static_cast<int>(u.size()) != profile.dimension())
    throw DimensionError("flow: point dimension does not match the profile");
  if (std::fabs(norm(u) - 1.0) > 1e-9) throw DomainError("flow: |u0| must be 1 within 1e-9");
}

// Tangential field grad Theta(u) = (I - uu) grad_ambient(u).
void sphere_grad(const AngularProfile& profile, const Vec& u, Vec& out) {
  int d = profile.dimension();
  profile.euclid_grad(u.data(), out.data());
  double ue = 0.0;
  for (int i = 0; i < d; ++i) ue += u[i] * out[i];
  for (int i = 0; i < d; ++i) out[i] -= ue * u[i];
}

void renormalize(Vec& u) {
  double n = norm(u);
  if (n > 0)
    for (double& v : u) v /= n;
}

}  // namespace

double advance_angle_flow_2d(const PlanarProfile& profile, double theta, double span,
                             int substeps) {
  if (substeps < 1) substeps = 1;
  double h = span / substeps;
  for (int k = 0; k < substeps; ++k) {
    double k1 = profile.dg(theta);
    double k2 = profile.dg(theta + 0.5 * h * k1);
    double k3 = profile.dg(theta + 0.5 * h * k2);
    double k4 = profile.dg(theta + h * k3);
    theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return theta;
}

Vec advance_flow(const AngularProfile& profile, Vec u, double span, int substeps) {
  if (profile.is_planar()) {
    const auto& p = static_cast<const PlanarProfile&>(profile);
    double th = advance_angle_flow_2d(p, std::atan2(u[1], u[0]), span, substeps);
    return {std::cos(th), std::sin(th)};
  }
  if (substeps < 1) substeps = 1;
  int d = profile.dimension();
  double h = span / substeps;
  Vec k1(d), k2(d), k3(d), k4(d), tmp(d);
  for (int n = 0; n < substeps; ++n) {
    sphere_grad(profile, u, k1);
    for (int i = 0; i < d; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
    sphere_grad(profile, tmp, k2);
    for (int i = 0; i < d; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
    sphere_grad(profile, tmp, k3);
    for (int i = 0; i < d; ++i) tmp[i] = u[i] + h * k3[i];
    sphere_grad(profile, tmp, k4);
    for (int i = 0; i < d; ++i)
      u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    renormalize(u);
  }
  return u;
}

FlowPath integrate_flow(const AngularProfile& profile, const Vec& u0, double t_end, double dt) {
  check_unit_point(profile, u0);
  if (!(dt > 0.0)) throw DomainError("flow: dt must be positive");
  FlowPath path;
  std::size_t nstep = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  path.times.reserve(nstep + 1);
  path.points.reserve(nstep + 1);
  path.theta_values.reserve(nstep + 1);

  if (profile.is_planar()) {
    const auto& p = static_cast<const PlanarProfile&>(profile);
    double th = std::atan2(u0[1], u0[0]);
    double t = 0.0;
    path.times.push_back(t);
    path.points.push_back({std::cos(th), std::sin(th)});
    path.theta_values.push_back(p.g(th));
    for (std::size_t n = 0; n < nstep; ++n) {
      double h = std::min(dt, t_end - t);
      th = advance_angle_flow_2d(p, th, h, 1);
      t += h;
      path.times.push_back(t);
      path.points.push_back({std::cos(th), std::sin(th)});
      path.theta_values.push_back(p.g(th));
    }
    return path;
  }

  Vec u = normalized(u0);
  double t = 0.0;
  path.times.push_back(t);
  path.points.push_back(u);
  path.theta_values.push_back(profile.value(u.data()));
  for (std::size_t n = 0; n < nstep; ++n) {
    double h = std::min(dt, t_end - t);
    u = advance_flow(profile, u, h, 1);
    t += h;
    path.times.push_back(t);
    path.points.push_back(u);
    path.theta_values.push_back(profile.value(u.data()));
  }
  return path;
}

// ---------------------------------------------------------------------------
// Critical sets

double CriticalSets::dist_angle(double th) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : maxima) {
    if (dimension == 2) {
      double lo = m.lo, hi = m.hi;
      double w = wrap_angle(th);
      // Inside the arc (handle wrap by shifting into the arc's frame).
      double rel = wrap_angle(w - lo);
      double len = hi - lo;
      if (rel >= 0.0 && rel <= len) return 0.0;
      best = std::min({best, angle_dist(w, lo), angle_dist(w, hi)});
    }
  }
  return best;
}

double CriticalSets::dist(const Vec& u) const {
  if (dimension == 2) return dist_angle(std::atan2(u[1], u[0]));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : maxima) best = std::min(best, sphere_dist(u, m.location));
  return best;
}

namespace {

double bisect_root(const PlanarProfile& p, double lo, double hi) {
  double flo = p.dg(lo);
  for (int it = 0; it < 200 && hi - lo > kRootTol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = p.dg(mid);
    if ((flo <= 0.0 && fm <= 0.0) || (flo >= 0.0 && fm >= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CriticalSets find_critical_sets_2d(const PlanarProfile& p, int resolution) {
  CriticalSets sets;
  sets.dimension = 2;

  bool bounded = p.has_boundary();
  double lo = p.theta0(), hi = p.theta1();
  double width = hi - lo;
  int n = resolution;
  // Interior grid; the support boundary itself is excluded (g' vanishes there
  // by construction but those are not critical points of Theta on {Theta>0}).
  std::vector<double> grid(n);
  std::vector<double> gp(n), gv(n);
  for (int i = 0; i < n; ++i) {
    double th = bounded ? lo + width * (i + 0.5) / n : -M_PI + 2.0 * M_PI * i / n;
    grid[i] = th;
    gp[i] = p.dg(th);
    gv[i] = p.g(th);
  }
  double vmin = *std::min_element(gv.begin(), gv.end());
  double vmax = *std::max_element(gv.begin(), gv.end());
  if (vmax - vmin < kDegenerateTol) {
    sets.degenerate = true;
    return sets;
  }

  // Roots of g' from sign changes (wrap-around pair included on the circle).
  std::vector<double> roots;
  int pairs = bounded ? n - 1 : n;
  for (int i = 0; i < pairs; ++i) {
    int j = (i + 1) % n;
    double a = grid[i];
    double b = bounded ? grid[j] : grid[i] + 2.0 * M_PI / n;
    if (gp[i] == 0.0) roots.push_back(a);
    if (gp[i] * gp[j] < 0.0) roots.push_back(bisect_root(p, a, b));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::fabs(a - b) < kRootTol * 10; }),
              roots.end());

  // Merge adjacent roots at equal Theta into plateau arcs.
  struct Arc {
    double lo, hi, theta;
  };
  std::vector<Arc> arcs;
  for (double r : roots) {
    double v = p.g(r);
    if (!arcs.empty() && v != 0.0 && std::fabs(v - arcs.back().theta) < kPlateauTol) {
      double mid = 0.5 * (arcs.back().hi + r);
      if (std::fabs(p.g(mid) - v) < kPlateauTol) {
        arcs.back().hi = r;
        continue;
      }
    }
    arcs.push_back({r, r, v});
  }

  // Classify by the sphere Hessian (g'' in 2D), falling back to side values.
  double side = std::max(1e-6, (bounded ? width : 2.0 * M_PI) / (8.0 * n));
  for (const auto& a : arcs) {
    double dd_lo = p.ddg(a.lo), dd_hi = p.ddg(a.hi);
    double vl = p.g(a.lo - side), vr = p.g(a.hi + side);
    bool is_max = false, is_min = false;
    if (dd_lo < -kPlateauTol && dd_hi < -kPlateauTol) {
      is_max = true;
    } else if (dd_lo > kPlateauTol && dd_hi > kPlateauTol) {
      is_min = true;
    } else {
      is_max = vl < a.theta && vr < a.theta;
      is_min = vl > a.theta && vr > a.theta;
    }
    if (is_max && a.theta > 0.0) {
      MaxArc m;
      m.lo = a.lo;
      m.hi = a.hi;
      double mid = 0.5 * (a.lo + a.hi);
      m.location = {std::cos(mid), std::sin(mid)};
      m.theta = a.theta;
      sets.maxima.push_back(m);
    } else if (is_min && a.theta > 0.0) {
      Well w;
      w.angle = 0.5 * (a.lo + a.hi);
      w.center = {std::cos(w.angle), std::sin(w.angle)};
      w.theta_min = a.theta;
      // Well radius: largest symmetric interval on which g'' stays positive.
      double step = (bounded ? width : 2.0 * M_PI) / n;
      double rmax = 0.0;
      for (double rad = step; rad < M_PI; rad += step) {
        if (bounded && (w.angle - rad <= lo || w.angle + rad >= hi)) break;
        if (p.ddg(w.angle - rad) <= 0.0 || p.ddg(w.angle + rad) <= 0.0) break;
        rmax = rad;
      }
      w.radius = 0.9 * rmax;
      if (w.radius > 0.0) {
        double edge = std::min(p.g(w.angle - w.radius), p.g(w.angle + w.radius));
        w.level = w.theta_min + 0.5 * (edge - w.theta_min);
      } else {
        w.level = w.theta_min;
      }
      sets.minima.push_back(w);
    }
  }
  return sets;
}

}  // namespace

std::vector<Vec> sphere_sample(int d, int count) {
  std::vector<Vec> pts;
  pts.reserve(count);
  if (d == 3) {
    double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
      pts.push_back({rr * std::cos(ga * i), rr * std::sin(ga * i), z});
    }
    return pts;
  }
  std::uint64_t state = 0x243F6A8885A308D3ULL;
  auto next_u64 = [&]() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  auto next_normal = [&]() {
    double u1 = ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  for (int i = 0; i < count; ++i) {
    Vec u(d);
    for (int k = 0; k < d; ++k) u[k] = next_normal();
    renormalize(u);
    pts.push_back(std::move(u));
  }
  return pts;
}

namespace {

CriticalSets find_critical_sets_nd(const AngularProfile& profile, int resolution) {
  CriticalSets sets;
  int d = profile.dimension();
  sets.dimension = d;
  int count = std::min(8192, 32 * resolution);
  auto sample = sphere_sample(d, count);

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (const auto& u : sample) {
    double v = profile.value(u.data());
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmax - vmin < kDegenerateTol) {
    sets.degenerate = true;
    return sets;
  }

  auto converge = [&](Vec u, double sign) -> std::pair<Vec, bool> {
    Vec gradbuf(d);
    for (int it = 0; it < 40000; ++it) {
      sphere_grad(profile, u, gradbuf);
      double gn = norm(gradbuf);
      if (gn < 1e-10) return {u, true};
      double h = std::min(0.02, 0.2 / std::max(gn, 1e-6));
      for (int i = 0; i < d; ++i) u[i] += sign * h * gradbuf[i];
      renormalize(u);
      if (sign < 0 && !profile.in_support(u.data())) return {u, false};
    }
    return {u, false};
  };

  auto cluster_add = [&](std::vector<Vec>& centers, const Vec& u) {
    for (auto& c : centers)
      if (sphere_dist(c, u) < 1e-3) return;
    centers.push_back(u);
  };

  std::vector<Vec> maxima, minima;
  for (const auto& u0 : sample) {
    if (!profile.in_support(u0.data())) continue;
    auto [um, ok] = converge(u0, +1.0);
    if (ok && profile.value(um.data()) > 0.0) cluster_add(maxima, um);
  }
  for (const auto& u0 : sample) {
    if (!profile.in_support(u0.data())) continue;
    auto [um, ok] = converge(u0, -1.0);
    if (ok && profile.value(um.data()) > 0.0) cluster_add(minima, um);
  }
  // Drop "minima" that coincide with maxima (flat directions of the ascent).
  for (const auto& m : maxima) {
    MaxArc arc;
    arc.location = m;
    arc.theta = profile.value(m.data());
    sets.maxima.push_back(arc);
    minima.erase(std::remove_if(minima.begin(), minima.end(),
                                [&](const Vec& w) { return sphere_dist(w, m) < 1e-2; }),
                 minima.end());
  }
  for (const auto& m : minima) {
    Well w;
    w.center = m;
    w.theta_min = profile.value(m.data());
    // Empirical convexity radius: probe circles of increasing radius.
    Vec tan(d, 0.0);
    // any tangent direction
    int axis = 0;
    for (int i = 1; i < d; ++i)
      if (std::fabs(m[i]) < std::fabs(m[axis])) axis = i;
    tan[axis] = 1.0;
    double mdot = dot(tan, m);
    for (int i = 0; i < d; ++i) tan[i] -= mdot * m[i];
    renormalize(tan);
    double rmax = 0.0;
    for (double rad = 0.02; rad < M_PI / 2; rad += 0.02) {
      Vec u(d);
      bool convex = true;
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        for (int i = 0; i < d; ++i) u[i] = std::cos(rad) * m[i] + sgn * std::sin(rad) * tan[i];
        Mat H = hess_sphere_theta(profile, u);
        double q = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) q += tan[i] * H(i, j) * tan[j];
        if (q <= 0.0) convex = false;
      }
      if (!convex) break;
      rmax = rad;
    }
    w.radius = 0.9 * rmax;
    if (w.radius > 0.0) {
      Vec u(d);
      double edge = std::numeric_limits<double>::infinity();
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        for (int i = 0; i < d; ++i)
          u[i] = std::cos(w.radius) * m[i] + sgn * std::sin(w.radius) * tan[i];
        edge = std::min(edge, profile.value(u.data()));
      }
      w.level = w.theta_min + 0.5 * (edge - w.theta_min);
    } else {
      w.level = w.theta_min;
    }
    sets.minima.push_back(w);
  }
  return sets;
}

}  // namespace

CriticalSets find_critical_sets(const AngularProfile& profile, int resolution) {
  if (resolution < 64) throw ConfigError("find_critical_sets: resolution must be >= 64");
  if (profile.is_planar())
    return find_critical_sets_2d(static_cast<const PlanarProfile&>(profile), resolution);
  return find_critical_sets_nd(profile, resolution);
}

double attraction_time(const AngularProfile& profile, const std::vector<Vec>& initial,
                       double r, const CriticalSets& sets, double dt, double t_cap) {
  double sup = 0.0;
  for (const auto& u0 : initial) {
    check_unit_point(profile, u0);
    if (sets.dist(u0) <= r) continue;
    Vec u = u0;
    double t = 0.0;
    bool reached = false;
    while (t < t_cap) {
      u = advance_flow(profile, u, dt, 1);
      t += dt;
      if (sets.dist(u) <= r) {
        reached = true;
        break;
      }
    }
    if (!reached) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, t);
  }
  return sup;
}

}  // namespace zeronoise
