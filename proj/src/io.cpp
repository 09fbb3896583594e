#include "zeronoise/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zeronoise/errors.hpp"

namespace zeronoise {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string flow_csv(const FlowPath& path) {
  std::ostringstream out;
  int d = path.points.empty() ? 2 : static_cast<int>(path.points[0].size());
  if (d == 2) {
    out << "t,angle,theta\n";
    for (std::size_t i = 0; i < path.times.size(); ++i)
      out << num(path.times[i]) << ','
          << num(std::atan2(path.points[i][1], path.points[i][0])) << ','
          << num(path.theta_values[i]) << '\n';
  } else {
    out << "t";
    for (int k = 1; k <= d; ++k) out << ",u" << k;
    out << ",theta\n";
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      out << num(path.times[i]);
      for (int k = 0; k < d; ++k) out << ',' << num(path.points[i][k]);
      out << ',' << num(path.theta_values[i]) << '\n';
    }
  }
  return out.str();
}

std::string path_csv(const PathRecord& rec) {
  std::ostringstream out;
  int d = rec.dimension();
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  out << ",R,V,g,";
  if (d == 2) {
    out << "theta";
  } else {
    for (int k = 1; k <= d; ++k) out << "u" << k << (k < d ? "," : "");
  }
  out << ",Sigma\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << num(rec.times[i]);
    for (int k = 0; k < d; ++k) out << ',' << num(rec.states[i][k]);
    out << ',' << num(rec.radius[i]) << ',' << num(rec.potential[i]) << ','
        << num(rec.g_values[i]) << ',';
    if (d == 2) {
      out << num(std::atan2(rec.angles[i][1], rec.angles[i][0]));
    } else {
      for (int k = 0; k < d; ++k) out << num(rec.angles[i][k]) << (k < d - 1 ? "," : "");
    }
    out << ',' << num(rec.sigma[i]) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json hit_json(const HitTime& h) {
  nlohmann::ordered_json j;
  j["hit"] = h.hit;
  if (h.hit)
    j["time"] = h.time;
  else
    j["time"] = nullptr;
  return j;
}

}  // namespace

std::string stopping_json(const StoppingTimes& st) {
  nlohmann::ordered_json j;
  j["tau_v0"] = hit_json(st.tau_v0);
  j["nu_v0"] = hit_json(st.nu_v0);
  j["kappa"] = hit_json(st.kappa);
  j["gamma"] = hit_json(st.gamma);
  j["zeta"] = hit_json(st.zeta);
  j["xi_half"] = hit_json(st.xi_half);
  j["Xi_one"] = hit_json(st.Xi_one);
  j["rho_delta"] = hit_json(st.rho_delta);
  j["exit_rho"] = hit_json(st.exit_rho);
  j["well_exit"] = hit_json(st.well_exit);
  j["sigma_blocks"] = st.sigma_blocks;
  j["g_at_tau"] = st.tau_v0.hit ? nlohmann::ordered_json(st.g_at_tau)
                                : nlohmann::ordered_json(nullptr);
  j["kappa_threshold"] = st.kappa_threshold;
  return j.dump(2);
}

std::string scan_csv(const std::vector<std::pair<double, double>>& scan) {
  std::ostringstream out;
  out << "theta,value\n";
  for (const auto& [th, v] : scan) out << num(th) << ',' << num(v) << '\n';
  return out.str();
}

std::string curve_csv(const std::vector<std::pair<double, double>>& curve) {
  std::ostringstream out;
  out << "theta,g\n";
  for (const auto& [th, v] : curve) out << num(th) << ',' << num(v) << '\n';
  return out.str();
}

}  // namespace zeronoise
