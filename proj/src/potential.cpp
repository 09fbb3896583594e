#include "zeronoise/potential.hpp"

#include <cmath>
#include <cstring>

#include "zeronoise/errors.hpp"

namespace zeronoise {

Exponents::Exponents(double a, double b) : alpha(a), beta(b) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("exponents: alpha must lie in (0, 1)");
  if (!(b > a && b <= 1.0)) throw DomainError("exponents: beta must lie in (alpha, 1]");
}

PotentialModel::PotentialModel(ProfilePtr g_profile, Exponents exps)
    : g_(std::move(g_profile)), h_(nullptr), exp_(exps) {
  if (!g_) throw DomainError("potential: g profile required");
}

PotentialModel::PotentialModel(ProfilePtr g_profile, ProfilePtr h_profile, Exponents exps)
    : g_(std::move(g_profile)), h_(std::move(h_profile)), exp_(exps) {
  if (!g_) throw DomainError("potential: g profile required");
  if (h_ && h_->dimension() != g_->dimension())
    throw DimensionError("potential: g and h profiles must share the dimension");
}

PotentialModel PotentialModel::pure(ProfilePtr g_profile, double alpha) {
  PotentialModel m(std::move(g_profile), Exponents(alpha, 1.0));
  m.beta_defaulted_ = true;
  return m;
}

namespace {

inline double radius(const double* x, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

}  // namespace

double PotentialModel::value(const double* x, int d) const {
  double r = radius(x, d);
  if (r == 0.0) return 0.0;
  Vec u(d);
  for (int i = 0; i < d; ++i) u[i] = x[i] / r;
  double v = g_->value(u.data()) * std::pow(r, 1.0 + exp_.alpha);
  if (h_) v += h_->value(u.data()) * std::pow(r, 1.0 + exp_.beta);
  return v;
}

void PotentialModel::gradient(const double* x, int d, double* out) const {
  double r = radius(x, d);
  if (r == 0.0) {
    for (int i = 0; i < d; ++i) out[i] = 0.0;
    return;
  }
  if (d == 2 && g_->is_planar() && (!h_ || h_->is_planar())) {
    // 2D closed form: (1+a) g r^a u_rho + g' r^a u_theta.
    const auto& gp = static_cast<const PlanarProfile&>(*g_);
    double th = std::atan2(x[1], x[0]);
    double c = x[0] / r, s = x[1] / r;
    double ra = std::pow(r, exp_.alpha);
    double radial = (1.0 + exp_.alpha) * gp.g(th) * ra;
    double tangential = gp.dg(th) * ra;
    if (h_) {
      const auto& hp = static_cast<const PlanarProfile&>(*h_);
      double rb = std::pow(r, exp_.beta);
      radial += (1.0 + exp_.beta) * hp.g(th) * rb;
      tangential += hp.dg(th) * rb;
    }
    out[0] = radial * c - tangential * s;
    out[1] = radial * s + tangential * c;
    return;
  }
  gradient_general(x, d, out);
}

void PotentialModel::gradient_general(const double* x, int d, double* out) const {
  double r = radius(x, d);
  if (r == 0.0) {
    for (int i = 0; i < d; ++i) out[i] = 0.0;
    return;
  }
  Vec u(d), eg(d);
  for (int i = 0; i < d; ++i) u[i] = x[i] / r;
  auto add_part = [&](const AngularProfile& prof, double expo) {
    prof.euclid_grad(u.data(), eg.data());
    double gu = prof.value(u.data());
    double ue = 0.0;
    for (int i = 0; i < d; ++i) ue += u[i] * eg[i];
    double ra = std::pow(r, expo);
    for (int i = 0; i < d; ++i)
      out[i] += ra * (eg[i] - ue * u[i]) + (1.0 + expo) * gu * ra * u[i];
  };
  for (int i = 0; i < d; ++i) out[i] = 0.0;
  add_part(*g_, exp_.alpha);
  if (h_) add_part(*h_, exp_.beta);
}

double PotentialModel::laplacian(const double* x, int d) const {
  double r = radius(x, d);
  if (r == 0.0) throw DomainError("laplacian: undefined at the origin");
  if (d == 2 && g_->is_planar() && (!h_ || h_->is_planar())) {
    // 2D closed form: ((1+a)^2 g + g'') r^{a-1}.
    const auto& gp = static_cast<const PlanarProfile&>(*g_);
    double th = std::atan2(x[1], x[0]);
    double a = exp_.alpha;
    double v = ((1.0 + a) * (1.0 + a) * gp.g(th) + gp.ddg(th)) * std::pow(r, a - 1.0);
    if (h_) {
      const auto& hp = static_cast<const PlanarProfile&>(*h_);
      double b = exp_.beta;
      v += ((1.0 + b) * (1.0 + b) * hp.g(th) + hp.ddg(th)) * std::pow(r, b - 1.0);
    }
    return v;
  }
  // General dimension:
  // r^{a-1} ( tr[(I-uu)(hess - (u.grad) I)(I-uu)] + (1+a)(d-1+a) g(u) ).
  Vec u(d), eg(d);
  Mat eh(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) u[i] = x[i] / r;
  auto add_part = [&](const AngularProfile& prof, double expo) {
    prof.euclid_grad(u.data(), eg.data());
    prof.euclid_hess(u.data(), eh.a.data());
    double gu = prof.value(u.data());
    double ue = 0.0;
    for (int i = 0; i < d; ++i) ue += u[i] * eg[i];
    // trace of P (H - ue I) P with P = I - uu:
    // tr(P H P) = tr(H) - 2 u.H u + (u.H u) = tr(H) - u.H u ... computed directly.
    double uHu = 0.0, trH = 0.0;
    for (int i = 0; i < d; ++i) {
      trH += eh(i, i);
      for (int j = 0; j < d; ++j) uHu += u[i] * eh(i, j) * u[j];
    }
    double tr_proj = trH - uHu - ue * (d - 1);
    total += std::pow(r, expo - 1.0) *
             (tr_proj + (1.0 + expo) * (d - 1.0 + expo) * gu);
  };
  add_part(*g_, exp_.alpha);
  if (h_) add_part(*h_, exp_.beta);
  return total;
}

Vec PotentialModel::gradient(const Vec& x) const {
  Vec out(x.size());
  gradient(x.data(), static_cast<int>(x.size()), out.data());
  return out;
}

double PotentialModel::laplacian(const Vec& x) const {
  return laplacian(x.data(), static_cast<int>(x.size()));
}

void PotentialModel::eval_all(const double* x, int d, PointEval& eval, double radius_floor) const {
  if (eval.unit.size() != static_cast<std::size_t>(d)) eval.unit.assign(d, 0.0);
  if (eval.grad.size() != static_cast<std::size_t>(d)) eval.grad.assign(d, 0.0);
  double r = radius(x, d);
  eval.radius = r;
  if (r < radius_floor) {
    // The state is treated as the origin: V = 0, g = 0, zero drift.  The
    // angle keeps its previous content (the process never revisits 0 after
    // leaving it, so this only matters at the very start of a path).
    eval.potential = 0.0;
    eval.g = 0.0;
    for (int i = 0; i < d; ++i) eval.grad[i] = 0.0;
    return;
  }
  for (int i = 0; i < d; ++i) eval.unit[i] = x[i] / r;
  if (d == 2 && g_->is_planar() && (!h_ || h_->is_planar())) {
    const auto& gp = static_cast<const PlanarProfile&>(*g_);
    double th = std::atan2(x[1], x[0]);
    double gv = gp.g(th);
    double dgv = gp.dg(th);
    double ra = std::pow(r, exp_.alpha);
    double radial = (1.0 + exp_.alpha) * gv * ra;
    double tangential = dgv * ra;
    eval.g = gv;
    eval.potential = gv * ra * r;
    if (h_) {
      const auto& hp = static_cast<const PlanarProfile&>(*h_);
      double hv = hp.g(th);
      double rb = std::pow(r, exp_.beta);
      eval.potential += hv * rb * r;
      radial += (1.0 + exp_.beta) * hv * rb;
      tangential += hp.dg(th) * rb;
    }
    eval.grad[0] = radial * eval.unit[0] - tangential * eval.unit[1];
    eval.grad[1] = radial * eval.unit[1] + tangential * eval.unit[0];
    return;
  }
  eval.g = g_->value(eval.unit.data());
  eval.potential = eval.g * std::pow(r, 1.0 + exp_.alpha);
  if (h_) eval.potential += h_->value(eval.unit.data()) * std::pow(r, 1.0 + exp_.beta);
  gradient_general(x, d, eval.grad.data());
}

namespace {

void check_unit(const AngularProfile& profile, const Vec& u) {
  if (static_cast<int>(u.size()) != profile.dimension())
    throw DimensionError("sphere op: point dimension does not match the profile");
  double n = norm(u);
  if (std::fabs(n - 1.0) > 1e-9)
    throw DomainError("sphere op: |u| deviates from 1 beyond 1e-9");
}

}  // namespace

double theta_value(const AngularProfile& profile, const Vec& u) {
  check_unit(profile, u);
  return profile.value(u.data());
}

Vec grad_sphere_theta(const AngularProfile& profile, const Vec& u) {
  check_unit(profile, u);
  int d = profile.dimension();
  Vec eg(d), out(d);
  profile.euclid_grad(u.data(), eg.data());
  double ue = dot(u, eg);
  for (int i = 0; i < d; ++i) out[i] = eg[i] - ue * u[i];
  return out;
}

Mat hess_sphere_theta(const AngularProfile& profile, const Vec& u) {
  check_unit(profile, u);
  int d = profile.dimension();
  Vec eg(d);
  Mat eh(d), out(d);
  profile.euclid_grad(u.data(), eg.data());
  profile.euclid_hess(u.data(), eh.a.data());
  double ue = dot(u, eg);
  // (I - uu) [H - ue I]
  Mat inner(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) inner(i, j) = eh(i, j) - (i == j ? ue : 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = inner(i, j);
      for (int k = 0; k < d; ++k) s -= u[i] * u[k] * inner(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

}  // namespace zeronoise
