#ifndef ZERONOISE_SVG_HPP
#define ZERONOISE_SVG_HPP

#include <string>
#include <vector>

#include "zeronoise/geometry.hpp"

namespace zeronoise {

/// Profile panel: g(theta) together with the boundary-Laplacian curve
/// (1+alpha)^2 g + g'' on a shared angle axis.
std::string render_profile_figure(const std::vector<std::pair<double, double>>& g_curve,
                                  const std::vector<std::pair<double, double>>& lap_curve);

struct PathPanel {
  double epsilon = 0.0;
  // Each path: a polyline of (x, y) samples.
  std::vector<std::vector<std::pair<double, double>>> paths;
};

/// Grid of per-epsilon path panels with thick rays along the expected exit
/// directions and the measurement circle R = rho_exit.
std::string render_paths_figure(const std::vector<PathPanel>& panels,
                                const std::vector<double>& ray_angles, double rho_exit);

}  // namespace zeronoise

#endif
