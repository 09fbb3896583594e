#ifndef ZERONOISE_ASSUMPTIONS_HPP
#define ZERONOISE_ASSUMPTIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "zeronoise/potential.hpp"
#include "zeronoise/sphereflow.hpp"

namespace zeronoise {

enum class Verdict { Pass, Fail, Unchecked };

std::string to_string(Verdict v);

/// One sample backing a verdict.  `value` is the checked quantity, `bound`
/// its admissible limit, `margin` the signed slack (negative = violated).
struct Witness {
  Vec x;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::string detail;
};

struct CheckResult {
  std::string id;          // e.g. "A2.laplacian-positivity"
  std::string assumption;  // "A1".."A4", "B1".."B4"
  Verdict verdict = Verdict::Unchecked;
  double margin = 0.0;     // worst signed margin over the scan
  std::vector<Witness> witnesses;
  std::string note;
};

struct EstimatedConstants {
  double C0 = 0.0;             // 1.1 x extremal upper ratios
  double c0 = 0.0;             // cone level (0.5 x max g)
  double c0_grad_ratio = 0.0;  // min |grad V| |x| / V on {g > 0}
  double a0 = 0.0;             // level found by the positivity search
  double cone_center = 0.0;    // 2D
  double cone_half_angle = 0.0;
  Vec cone_direction;          // d >= 3
  double fitted_p = 0.0;       // only when the profile does not declare p
  bool p_was_fitted = false;
};

struct CriticalSummary {
  int n_maxima = 0;
  int n_minima = 0;
  bool degenerate = false;
  std::vector<double> maxima_angles;  // 2D
};

/// Sampling grid: log-spaced radii x full angular range.
struct GridSpec {
  double r_min = 1e-4;
  double r_max = 1.0;
  int n_radii = 256;
  int n_angles = 1024;
  double basin_a = 0.05;       // Theta level for the empirical B3 scan
  double basin_r = 0.02 * M_PI;  // target distance to S for the B3 scan
};

struct ValidationReport {
  std::string model_name;
  int dimension = 2;
  GridSpec grid;
  std::vector<CheckResult> checks;
  EstimatedConstants constants;
  std::optional<CriticalSummary> critical;

  bool all_pass() const;
  const CheckResult* find(const std::string& id) const;
  std::string to_json() const;
  std::string witnesses_csv() const;
};

/// Certify Assumption A on the sampled grid: gradient/Hessian growth bounds,
/// Laplacian positivity on {0 < g < a0}, the c0-cone, the gradient lower
/// bound on {g > 0} and the A4 boundary-rate sandwich.
ValidationReport check_assumption_A(const PotentialModel& model, const GridSpec& grid = {});

/// Certify Assumption B: the B1 Hessian rate, B2 residual bounds, well
/// convexity (B4) and the empirical (unchecked) B3 attraction scan.
ValidationReport check_assumption_B(const PotentialModel& model, const GridSpec& grid = {});

/// Re-evaluate a witness in isolation; returns the recomputed margin.
double recheck_witness(const PotentialModel& model, const ValidationReport& report,
                       const CheckResult& check, const Witness& witness);

/// (theta, (1+alpha)^2 g(theta) + g''(theta)) on a uniform angle grid over
/// the support closure.  2D models only (DimensionError otherwise).
std::vector<std::pair<double, double>> boundary_laplacian_scan(const PotentialModel& model,
                                                               int n_angles);

}  // namespace zeronoise

#endif
