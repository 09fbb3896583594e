#ifndef ZERONOISE_PROFILE_HPP
#define ZERONOISE_PROFILE_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zeronoise/geometry.hpp"

namespace zeronoise {

/// Angular part of a potential: a non-negative function Theta on the unit
/// sphere, together with the boundary-rate descriptor (L, p) of its support.
///
/// Implementations must evaluate to exactly 0 outside the support and use the
/// one-sided limit 0 at the support boundary.  Euclidean derivatives are
/// those of the 0-homogeneous extension x -> Theta(x/|x|) evaluated at |u|=1.
class AngularProfile {
 public:
  virtual ~AngularProfile() = default;

  virtual int dimension() const = 0;
  virtual const std::string& name() const = 0;

  virtual double value(const double* u) const = 0;
  virtual void euclid_grad(const double* u, double* out) const = 0;
  /// Row-major d x d Hessian of the homogeneous extension.
  virtual void euclid_hess(const double* u, double* out) const = 0;

  /// Open support {Theta > 0}.
  virtual bool in_support(const double* u) const = 0;

  /// Boundary-rate function L; vanishes on the support boundary.  Profiles
  /// whose Theta never vanishes use L == 1.
  virtual double boundary_rate(const double* u) const = 0;
  /// Exponent p in Theta ~ L^{p+1} near the boundary.
  virtual double rate_exponent() const { return 1.0; }
  /// False when (L, p) is a guess the validator should fit from data.
  virtual bool rate_declared() const { return true; }

  virtual bool is_planar() const { return false; }

  // Convenience wrappers.
  double value(const Vec& u) const { return value(u.data()); }
  Vec euclid_grad(const Vec& u) const {
    Vec out(u.size());
    euclid_grad(u.data(), out.data());
    return out;
  }
};

/// Two-dimensional profile given by scalar angular callables g, g', g''.
/// The support, when bounded, is a single open interval (theta0, theta1)
/// in (-pi, pi]; g, g', g'' return exactly 0 outside it.
class PlanarProfile : public AngularProfile {
 public:
  int dimension() const final { return 2; }
  bool is_planar() const final { return true; }

  virtual double g(double theta) const = 0;
  virtual double dg(double theta) const = 0;
  virtual double ddg(double theta) const = 0;

  virtual bool has_boundary() const = 0;
  virtual double theta0() const = 0;
  virtual double theta1() const = 0;

  bool in_interval(double theta) const {
    if (!has_boundary()) return true;
    double t = wrap_angle(theta);
    return t > theta0() && t < theta1();
  }

  // AngularProfile surface in terms of the scalar callables.
  double value(const double* u) const override;
  void euclid_grad(const double* u, double* out) const override;
  void euclid_hess(const double* u, double* out) const override;
  bool in_support(const double* u) const override;
  double boundary_rate(const double* u) const override;
  double rate_of_angle(double theta) const;
};

/// Angular profile used by the reference two-dimensional experiment:
/// g(theta) = 2/(1.5 + tan^2 theta) - 2 cos^4 theta + cos^2 theta
/// on (-pi/2, pi/2), 0 outside.  Derivatives are closed-form.
class Sec7Profile final : public PlanarProfile {
 public:
  const std::string& name() const override;
  double g(double theta) const override;
  double dg(double theta) const override;
  double ddg(double theta) const override;
  bool has_boundary() const override { return true; }
  double theta0() const override { return -M_PI / 2; }
  double theta1() const override { return M_PI / 2; }
};

/// g(theta) = amplitude * cos(theta)^power on (-pi/2, pi/2).  power >= 2
/// keeps the profile C^{1,1} at the boundary.
class CosPowerProfile final : public PlanarProfile {
 public:
  CosPowerProfile(double amplitude, double power);
  const std::string& name() const override;
  double g(double theta) const override;
  double dg(double theta) const override;
  double ddg(double theta) const override;
  bool has_boundary() const override { return true; }
  double theta0() const override { return -M_PI / 2; }
  double theta1() const override { return M_PI / 2; }

 private:
  double amp_, pow_;
  std::string name_;
};

/// Sine-squared bump family on an arbitrary support (theta0, theta1):
/// g(theta) = sum_k a_k sin^2(k pi tau), tau = (theta-theta0)/(theta1-theta0).
class SinSqProfile final : public PlanarProfile {
 public:
  SinSqProfile(double th0, double th1, std::vector<double> coeffs);
  const std::string& name() const override;
  double g(double theta) const override;
  double dg(double theta) const override;
  double ddg(double theta) const override;
  bool has_boundary() const override { return true; }
  double theta0() const override { return th0_; }
  double theta1() const override { return th1_; }

 private:
  double th0_, th1_;
  std::vector<double> coeffs_;
  std::string name_;
};

/// Full-circle trigonometric polynomial c0 + sum_k (a_k cos k theta + b_k sin
/// k theta); no support boundary.  Useful for profiles with interior wells.
class FourierProfile final : public PlanarProfile {
 public:
  // coeffs = {c0, a1, b1, a2, b2, ...}
  explicit FourierProfile(std::vector<double> coeffs);
  const std::string& name() const override;
  double g(double theta) const override;
  double dg(double theta) const override;
  double ddg(double theta) const override;
  bool has_boundary() const override { return false; }
  double theta0() const override { return -M_PI; }
  double theta1() const override { return M_PI; }

 private:
  std::vector<double> coeffs_;
  std::string name_;
};

/// User-supplied scalar g with optional derivatives; missing derivatives fall
/// back to central finite differences with step 1e-6.
class CallableProfile final : public PlanarProfile {
 public:
  using Fn = std::function<double(double)>;
  CallableProfile(std::string name, double th0, double th1, Fn g, Fn dg = nullptr,
                  Fn ddg = nullptr);
  const std::string& name() const override;
  double g(double theta) const override;
  double dg(double theta) const override;
  double ddg(double theta) const override;
  bool has_boundary() const override { return bounded_; }
  double theta0() const override { return th0_; }
  double theta1() const override { return th1_; }
  bool rate_declared() const override { return false; }

 private:
  std::string name_;
  double th0_, th1_;
  bool bounded_;
  Fn g_, dg_, ddg_;
};

/// Theta == constant on the whole sphere (any dimension).
class ConstantProfile final : public AngularProfile {
 public:
  ConstantProfile(int dim, double value);
  int dimension() const override { return dim_; }
  const std::string& name() const override;
  double value(const double* u) const override;
  void euclid_grad(const double* u, double* out) const override;
  void euclid_hess(const double* u, double* out) const override;
  bool in_support(const double* u) const override { return value_ > 0.0; }
  double boundary_rate(const double* u) const override { return 1.0; }

 private:
  int dim_;
  double value_;
  std::string name_;
};

/// Spherical-cap bump in dimension d >= 2:
/// Theta(u) = amplitude * (u_1 - kappa)_+^{p+1}; support {u_1 > kappa}.
class SphericalCapProfile final : public AngularProfile {
 public:
  SphericalCapProfile(int dim, double amplitude, double kappa, double p);
  int dimension() const override { return dim_; }
  const std::string& name() const override;
  double value(const double* u) const override;
  void euclid_grad(const double* u, double* out) const override;
  void euclid_hess(const double* u, double* out) const override;
  bool in_support(const double* u) const override;
  double boundary_rate(const double* u) const override;
  double rate_exponent() const override { return p_; }

 private:
  int dim_;
  double amp_, kappa_, p_;
  std::string name_;
};

using ProfilePtr = std::shared_ptr<const AngularProfile>;
using ProfileParams = std::map<std::string, std::string>;

/// Registry of builtin profiles.  Known names: "sec7", "radial", "bump2d",
/// "spherical-d".  bump2d expects params family/support/coeffs; radial takes
/// value/dim; spherical-d takes dim/amplitude/kappa/p.
ProfilePtr make_profile(const std::string& name, const ProfileParams& params = {});

/// Parse a custom 2D profile spec (key = value lines: family, support,
/// coeffs) into a bump2d instance.
ProfilePtr parse_profile_spec(const std::string& text);
ProfilePtr load_profile_spec(const std::string& path);

}  // namespace zeronoise

#endif
