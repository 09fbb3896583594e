#include "zeronoise/profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "zeronoise/errors.hpp"

namespace zeronoise {

namespace {

// Polar-frame derivatives of the homogeneous extension x -> g(arg x) at a
// point u = (cos th, sin th) of the unit circle:
//   grad   = g'(th) u_th
//   hess   = [g'' s^2 + 2 g' c s,   -g'' c s + g'(s^2 - c^2);
//             symm.,                 g'' c^2 - 2 g' c s]
void planar_ambient(double c, double s, double gp, double gpp, double* grad, double* hess) {
  if (grad) {
    grad[0] = -gp * s;
    grad[1] = gp * c;
  }
  if (hess) {
    hess[0] = gpp * s * s + 2.0 * gp * c * s;
    hess[1] = -gpp * c * s + gp * (s * s - c * c);
    hess[2] = hess[1];
    hess[3] = gpp * c * c - 2.0 * gp * c * s;
  }
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PlanarProfile

double PlanarProfile::value(const double* u) const { return g(std::atan2(u[1], u[0])); }

void PlanarProfile::euclid_grad(const double* u, double* out) const {
  double th = std::atan2(u[1], u[0]);
  planar_ambient(u[0], u[1], dg(th), 0.0, out, nullptr);
}

void PlanarProfile::euclid_hess(const double* u, double* out) const {
  double th = std::atan2(u[1], u[0]);
  planar_ambient(u[0], u[1], dg(th), ddg(th), nullptr, out);
}

bool PlanarProfile::in_support(const double* u) const {
  return in_interval(std::atan2(u[1], u[0]));
}

double PlanarProfile::rate_of_angle(double theta) const {
  if (!has_boundary()) return 1.0;
  double t = wrap_angle(theta);
  double lo = t - theta0();
  double hi = theta1() - t;
  double m = std::min(lo > 0 ? lo : 0.0, hi > 0 ? hi : 0.0);
  return m;
}

double PlanarProfile::boundary_rate(const double* u) const {
  return rate_of_angle(std::atan2(u[1], u[0]));
}

// ---------------------------------------------------------------------------
// Sec7Profile
//
// With t = cos^2 theta the profile reads G(t) = 4t/(2+t) - 2t^2 + t, using
// 2/(1.5 + tan^2) = 4 cos^2/(2 + cos^2).  Then
//   g'(th)  = -G'(t) sin 2th,
//   g''(th) = G''(t) sin^2 2th - 2 G'(t) cos 2th.

namespace {
inline double sec7_G(double t) { return 4.0 * t / (2.0 + t) - 2.0 * t * t + t; }
inline double sec7_Gp(double t) { return 8.0 / ((2.0 + t) * (2.0 + t)) - 4.0 * t + 1.0; }
inline double sec7_Gpp(double t) { return -16.0 / ((2.0 + t) * (2.0 + t) * (2.0 + t)) - 4.0; }
}  // namespace

const std::string& Sec7Profile::name() const {
  static const std::string n = "sec7";
  return n;
}

double Sec7Profile::g(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double c = std::cos(theta);
  return sec7_G(c * c);
}

double Sec7Profile::dg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double c = std::cos(theta), s = std::sin(theta);
  return -sec7_Gp(c * c) * 2.0 * c * s;
}

double Sec7Profile::ddg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double c = std::cos(theta), s = std::sin(theta);
  double t = c * c;
  double s2 = 2.0 * c * s;
  double c2 = c * c - s * s;
  return sec7_Gpp(t) * s2 * s2 - 2.0 * sec7_Gp(t) * c2;
}

// ---------------------------------------------------------------------------
// CosPowerProfile

CosPowerProfile::CosPowerProfile(double amplitude, double power)
    : amp_(amplitude), pow_(power), name_("cospow") {
  if (!(power >= 2.0)) throw DomainError("cospow: power must be >= 2 for a C^{1,1} profile");
  if (!(amplitude > 0.0)) throw DomainError("cospow: amplitude must be positive");
}

const std::string& CosPowerProfile::name() const { return name_; }

double CosPowerProfile::g(double theta) const {
  if (!in_interval(theta)) return 0.0;
  return amp_ * std::pow(std::cos(theta), pow_);
}

double CosPowerProfile::dg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double c = std::cos(theta), s = std::sin(theta);
  return -amp_ * pow_ * std::pow(c, pow_ - 1.0) * s;
}

double CosPowerProfile::ddg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double c = std::cos(theta), s = std::sin(theta);
  return amp_ * (pow_ * (pow_ - 1.0) * std::pow(c, pow_ - 2.0) * s * s -
                 pow_ * std::pow(c, pow_));
}

// ---------------------------------------------------------------------------
// SinSqProfile

SinSqProfile::SinSqProfile(double th0, double th1, std::vector<double> coeffs)
    : th0_(th0), th1_(th1), coeffs_(std::move(coeffs)), name_("sinsq") {
  if (!(th0 < th1) || th1 - th0 > 2.0 * M_PI)
    throw DomainError("sinsq: support must satisfy theta0 < theta1 <= theta0 + 2pi");
  if (coeffs_.empty()) throw DomainError("sinsq: at least one coefficient required");
}

const std::string& SinSqProfile::name() const { return name_; }

double SinSqProfile::g(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double tau = (wrap_angle(theta) - th0_) / (th1_ - th0_);
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double s = std::sin((k + 1) * M_PI * tau);
    v += coeffs_[k] * s * s;
  }
  return v;
}

double SinSqProfile::dg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double w = th1_ - th0_;
  double tau = (wrap_angle(theta) - th0_) / w;
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double om = (k + 1) * M_PI;
    v += coeffs_[k] * om / w * std::sin(2.0 * om * tau);
  }
  return v;
}

double SinSqProfile::ddg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double w = th1_ - th0_;
  double tau = (wrap_angle(theta) - th0_) / w;
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double om = (k + 1) * M_PI;
    v += coeffs_[k] * 2.0 * om * om / (w * w) * std::cos(2.0 * om * tau);
  }
  return v;
}

// ---------------------------------------------------------------------------
// FourierProfile

FourierProfile::FourierProfile(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)), name_("fourier") {
  if (coeffs_.empty()) throw DomainError("fourier: at least the constant term required");
}

const std::string& FourierProfile::name() const { return name_; }

double FourierProfile::g(double theta) const {
  double v = coeffs_[0];
  for (std::size_t i = 1; i < coeffs_.size(); i += 2) {
    std::size_t k = (i + 1) / 2;
    v += coeffs_[i] * std::cos(k * theta);
    if (i + 1 < coeffs_.size()) v += coeffs_[i + 1] * std::sin(k * theta);
  }
  return v;
}

double FourierProfile::dg(double theta) const {
  double v = 0.0;
  for (std::size_t i = 1; i < coeffs_.size(); i += 2) {
    std::size_t k = (i + 1) / 2;
    v += -coeffs_[i] * k * std::sin(k * theta);
    if (i + 1 < coeffs_.size()) v += coeffs_[i + 1] * k * std::cos(k * theta);
  }
  return v;
}

double FourierProfile::ddg(double theta) const {
  double v = 0.0;
  for (std::size_t i = 1; i < coeffs_.size(); i += 2) {
    std::size_t k = (i + 1) / 2;
    v += -coeffs_[i] * k * k * std::cos(k * theta);
    if (i + 1 < coeffs_.size()) v += -coeffs_[i + 1] * k * k * std::sin(k * theta);
  }
  return v;
}

// ---------------------------------------------------------------------------
// CallableProfile

CallableProfile::CallableProfile(std::string name, double th0, double th1, Fn g, Fn dg, Fn ddg)
    : name_(std::move(name)),
      th0_(th0),
      th1_(th1),
      bounded_(!(th0 <= -M_PI && th1 >= M_PI)),
      g_(std::move(g)),
      dg_(std::move(dg)),
      ddg_(std::move(ddg)) {
  if (!g_) throw DomainError("callable profile: g required");
  if (bounded_ && !(th0 < th1)) throw DomainError("callable profile: bad support interval");
}

const std::string& CallableProfile::name() const { return name_; }

double CallableProfile::g(double theta) const {
  if (!in_interval(theta)) return 0.0;
  return g_(wrap_angle(theta));
}

double CallableProfile::dg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double t = wrap_angle(theta);
  if (dg_) return dg_(t);
  const double h = 1e-6;
  return (g(t + h) - g(t - h)) / (2.0 * h);
}

double CallableProfile::ddg(double theta) const {
  if (!in_interval(theta)) return 0.0;
  double t = wrap_angle(theta);
  if (ddg_) return ddg_(t);
  const double h = 1e-6;
  return (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
}

// ---------------------------------------------------------------------------
// ConstantProfile

ConstantProfile::ConstantProfile(int dim, double value)
    : dim_(dim), value_(value), name_("radial") {
  if (dim < 2) throw DimensionError("radial: dimension must be >= 2");
  if (value < 0.0) throw DomainError("radial: profile value must be non-negative");
}

const std::string& ConstantProfile::name() const { return name_; }

double ConstantProfile::value(const double*) const { return value_; }

void ConstantProfile::euclid_grad(const double*, double* out) const {
  for (int i = 0; i < dim_; ++i) out[i] = 0.0;
}

void ConstantProfile::euclid_hess(const double*, double* out) const {
  for (int i = 0; i < dim_ * dim_; ++i) out[i] = 0.0;
}

// ---------------------------------------------------------------------------
// SphericalCapProfile
//
// With f(x) = x_1/|x| and ell = f - kappa:
//   grad f  = e1 - u_1 u                 (at |u| = 1)
//   hess f  = -(e1 (x) u + u (x) e1) - u_1 I + 3 u_1 u (x) u
//   Theta   = amp ell^{p+1},  grad = amp (p+1) ell^p grad f,
//   hess    = amp (p+1) [ p ell^{p-1} grad f (x) grad f + ell^p hess f ].

SphericalCapProfile::SphericalCapProfile(int dim, double amplitude, double kappa, double p)
    : dim_(dim), amp_(amplitude), kappa_(kappa), p_(p), name_("spherical-d") {
  if (dim < 2) throw DimensionError("spherical-d: dimension must be >= 2");
  if (!(amplitude > 0.0)) throw DomainError("spherical-d: amplitude must be positive");
  if (!(kappa > -1.0 && kappa < 1.0)) throw DomainError("spherical-d: kappa must be in (-1, 1)");
  if (!(p >= 1.0)) throw DomainError("spherical-d: p must be >= 1");
}

const std::string& SphericalCapProfile::name() const { return name_; }

bool SphericalCapProfile::in_support(const double* u) const { return u[0] > kappa_; }

double SphericalCapProfile::value(const double* u) const {
  double ell = u[0] - kappa_;
  if (ell <= 0.0) return 0.0;
  return amp_ * std::pow(ell, p_ + 1.0);
}

double SphericalCapProfile::boundary_rate(const double* u) const {
  double ell = u[0] - kappa_;
  return ell > 0.0 ? ell : 0.0;
}

void SphericalCapProfile::euclid_grad(const double* u, double* out) const {
  double ell = u[0] - kappa_;
  if (ell <= 0.0) {
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    return;
  }
  double c = amp_ * (p_ + 1.0) * std::pow(ell, p_);
  for (int i = 0; i < dim_; ++i) out[i] = -c * u[0] * u[i];
  out[0] += c;
}

void SphericalCapProfile::euclid_hess(const double* u, double* out) const {
  const int d = dim_;
  double ell = u[0] - kappa_;
  if (ell <= 0.0) {
    for (int i = 0; i < d * d; ++i) out[i] = 0.0;
    return;
  }
  std::vector<double> gf(d);
  for (int i = 0; i < d; ++i) gf[i] = -u[0] * u[i];
  gf[0] += 1.0;
  double cg = amp_ * (p_ + 1.0) * p_ * std::pow(ell, p_ - 1.0);
  double ch = amp_ * (p_ + 1.0) * std::pow(ell, p_);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double hf = -u[0] * (i == j ? 1.0 : 0.0) + 3.0 * u[0] * u[i] * u[j];
      if (i == 0) hf -= u[j];
      if (j == 0) hf -= u[i];
      out[i * d + j] = cg * gf[i] * gf[j] + ch * hf;
    }
  }
}

// ---------------------------------------------------------------------------
// Registry

namespace {

double param_or(const ProfileParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : std::stod(it->second);
}

ProfilePtr make_bump2d(const ProfileParams& params) {
  auto fam = params.find("family");
  if (fam == params.end()) throw ConfigError("bump2d: missing 'family'");
  auto cs = params.find("coeffs");
  if (cs == params.end()) throw ConfigError("bump2d: missing 'coeffs'");
  std::vector<double> coeffs = parse_number_list(cs->second);

  if (fam->second == "cospow") {
    if (coeffs.size() != 2) throw ConfigError("bump2d cospow: coeffs = amplitude, power");
    return std::make_shared<CosPowerProfile>(coeffs[0], coeffs[1]);
  }
  if (fam->second == "sinsq") {
    auto sup = params.find("support");
    if (sup == params.end()) throw ConfigError("bump2d sinsq: missing 'support'");
    std::vector<double> ab = parse_number_list(sup->second);
    if (ab.size() != 2) throw ConfigError("bump2d sinsq: support = theta0, theta1");
    return std::make_shared<SinSqProfile>(ab[0], ab[1], coeffs);
  }
  if (fam->second == "fourier") {
    return std::make_shared<FourierProfile>(coeffs);
  }
  throw ConfigError("bump2d: unknown family '" + fam->second + "'");
}

}  // namespace

ProfilePtr make_profile(const std::string& name, const ProfileParams& params) {
  if (name == "sec7") return std::make_shared<Sec7Profile>();
  if (name == "radial")
    return std::make_shared<ConstantProfile>(static_cast<int>(param_or(params, "dim", 2)),
                                             param_or(params, "value", 1.0));
  if (name == "bump2d") return make_bump2d(params);
  if (name == "spherical-d")
    return std::make_shared<SphericalCapProfile>(
        static_cast<int>(param_or(params, "dim", 3)), param_or(params, "amplitude", 1.0),
        param_or(params, "kappa", 0.0), param_or(params, "p", 1.0));
  throw ConfigError("unknown profile '" + name + "'");
}

ProfilePtr parse_profile_spec(const std::string& text) {
  ProfileParams params;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) params[key] = val;
  }
  return make_bump2d(params);
}

ProfilePtr load_profile_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile spec '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profile_spec(ss.str());
}

}  // namespace zeronoise
