#ifndef ZERONOISE_POTENTIAL_HPP
#define ZERONOISE_POTENTIAL_HPP

#include <memory>
#include <optional>
#include <string>

#include "zeronoise/geometry.hpp"
#include "zeronoise/profile.hpp"

namespace zeronoise {

/// Radial exponents of V = g |x|^{1+alpha} + h |x|^{1+beta}.
/// Requires 0 < alpha < 1 and alpha < beta <= 1.
struct Exponents {
  double alpha;
  double beta;
  Exponents(double a, double b);
};

/// One-point evaluation bundle for the simulation hot loop.
struct PointEval {
  double radius = 0.0;
  double potential = 0.0;
  double g = 0.0;
  Vec unit;  // x/|x|; unchanged when radius < floor
  Vec grad;
};

/// Potential V(x) = g(x/|x|) |x|^{1+alpha} + h(x/|x|) |x|^{1+beta} with
/// V(0) = 0.  The h part is optional and must have support disjoint from g's.
class PotentialModel {
 public:
  PotentialModel(ProfilePtr g_profile, Exponents exps);
  PotentialModel(ProfilePtr g_profile, ProfilePtr h_profile, Exponents exps);

  /// Pure-g model with the default beta = 1 (vacuous when h == 0).
  static PotentialModel pure(ProfilePtr g_profile, double alpha);

  int dimension() const { return g_->dimension(); }
  const AngularProfile& profile() const { return *g_; }
  ProfilePtr profile_ptr() const { return g_; }
  const AngularProfile* h_profile() const { return h_ ? h_.get() : nullptr; }
  const Exponents& exponents() const { return exp_; }
  bool beta_defaulted() const { return beta_defaulted_; }

  double value(const Vec& x) const { return value(x.data(), static_cast<int>(x.size())); }
  Vec gradient(const Vec& x) const;
  double laplacian(const Vec& x) const;  // DomainError at x = 0

  double value(const double* x, int d) const;
  void gradient(const double* x, int d, double* out) const;
  double laplacian(const double* x, int d) const;

  /// General-dimension gradient formula
  /// |x|^a (I - u (x) u) grad_Theta(u) + (1+a) Theta(u) |x|^a u,
  /// exposed separately so the d = 2 closed form can be cross-checked.
  void gradient_general(const double* x, int d, double* out) const;

  /// Radius, potential, g value, unit direction and drift in one pass.
  /// `eval.unit` keeps its previous content when |x| < floor.
  void eval_all(const double* x, int d, PointEval& eval, double radius_floor = 1e-12) const;

 private:
  ProfilePtr g_;
  ProfilePtr h_;
  Exponents exp_;
  bool beta_defaulted_ = false;
};

/// Theta(u) with a unit-norm guard (|u| within 1e-9 of 1, else DomainError).
double theta_value(const AngularProfile& profile, const Vec& u);

/// Sphere gradient (I - u (x) u) grad Theta(u); orthogonal to u.
Vec grad_sphere_theta(const AngularProfile& profile, const Vec& u);

/// Sphere Hessian (I - u (x) u)[hess Theta(u) - (u . grad Theta(u)) I].
Mat hess_sphere_theta(const AngularProfile& profile, const Vec& u);

}  // namespace zeronoise

#endif
