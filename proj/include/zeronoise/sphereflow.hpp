#ifndef ZERONOISE_SPHEREFLOW_HPP
#define ZERONOISE_SPHEREFLOW_HPP

#include <limits>
#include <string>
#include <vector>

#include "zeronoise/geometry.hpp"
#include "zeronoise/profile.hpp"

namespace zeronoise {

/// Trajectory of the sphere flow phi' = grad Theta(phi).
struct FlowPath {
  std::vector<double> times;
  std::vector<Vec> points;          // unit vectors
  std::vector<double> theta_values; // Theta along the path
};

/// A local maximum of Theta; in 2D possibly a plateau arc [lo, hi].
struct MaxArc {
  double lo = 0.0;  // angular coordinates in 2D; lo == hi for a point
  double hi = 0.0;
  Vec location;     // embedded representative (midpoint for arcs)
  double theta = 0.0;
};

/// A local minimum u_w of Theta on {Theta > 0} together with its well
/// descriptors: radius e_w of the convexity ball and exit level a_w.
struct Well {
  Vec center;
  double angle = 0.0;       // 2D convenience
  double theta_min = 0.0;   // Theta(u_w)
  double radius = 0.0;      // e_w
  double level = 0.0;       // a_w < inf_{|u-u_w|=e_w} Theta
};

struct CriticalSets {
  int dimension = 2;
  std::vector<MaxArc> maxima;
  std::vector<Well> minima;
  bool degenerate = false;

  /// Geodesic distance from a unit vector to the nearest maximum (arc-aware).
  double dist(const Vec& u) const;
  /// 2D: distance from an angle to the nearest maximum.
  double dist_angle(double th) const;
};

/// Integrate the flow from u0 for t_end with step dt.  In 2D the scalar angle
/// ODE theta' = g'(theta) is integrated directly; in higher dimension RK4 on
/// the embedded ODE with renormalization after each step.
FlowPath integrate_flow(const AngularProfile& profile, const Vec& u0, double t_end, double dt);

/// Advance a 2D flow angle by `span` (used by the time-change comparison).
double advance_angle_flow_2d(const PlanarProfile& profile, double theta, double span,
                             int substeps);

/// Advance a general-d flow point by `span`; returns a unit vector.
Vec advance_flow(const AngularProfile& profile, Vec u, double span, int substeps);

/// Locate the critical sets of Theta on {Theta > 0}.  2D uses a sign-change
/// scan of g' refined by bisection to 1e-10; d >= 3 uses empirical
/// ascent/descent clustering from a deterministic sphere sample.
CriticalSets find_critical_sets(const AngularProfile& profile, int resolution);

/// Empirical sup over the samples of the first time dist(phi_t, S) <= r.
/// Returns +infinity if any sample fails to get within r by t_cap.
double attraction_time(const AngularProfile& profile, const std::vector<Vec>& initial,
                       double r, const CriticalSets& sets, double dt = 1e-3,
                       double t_cap = 1e4);

/// Deterministic quasi-uniform sample of the unit sphere (golden spiral in
/// d = 3, hashed normals in higher dimension).
std::vector<Vec> sphere_sample(int d, int count);

}  // namespace zeronoise

#endif
