#ifndef ZERONOISE_GEOMETRY_HPP
#define ZERONOISE_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace zeronoise {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  Vec out(a);
  double n = norm(a);
  if (n > 0) {
    for (double& v : out) v /= n;
  }
  return out;
}

// Geodesic (great-circle) distance between unit vectors.
inline double sphere_dist(const Vec& u, const Vec& v) {
  double c = dot(u, v);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

// Small dense square matrix, row-major.
struct Mat {
  int d = 0;
  std::vector<double> a;
  Mat() = default;
  explicit Mat(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }
};

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double th) {
  th = std::fmod(th, 2.0 * M_PI);
  if (th <= -M_PI) th += 2.0 * M_PI;
  if (th > M_PI) th -= 2.0 * M_PI;
  return th;
}

// Distance between two angles on the torus.
inline double angle_dist(double a, double b) { return std::fabs(wrap_angle(a - b)); }

}  // namespace zeronoise

#endif
