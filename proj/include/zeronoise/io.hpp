#ifndef ZERONOISE_IO_HPP
#define ZERONOISE_IO_HPP

#include <string>
#include <vector>

#include "zeronoise/sde.hpp"
#include "zeronoise/sphereflow.hpp"

namespace zeronoise {

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // ConfigError when missing

/// FlowPath CSV: t,angle,theta in 2D; t,u1..ud,theta otherwise.
std::string flow_csv(const FlowPath& path);

/// PathRecord CSV: t,x1..xd,R,V,g,theta (2D) or u1..ud,Sigma.
std::string path_csv(const PathRecord& rec);

/// StoppingTimes as a JSON block.
std::string stopping_json(const StoppingTimes& st);

/// Boundary-Laplacian scan CSV: theta,value.
std::string scan_csv(const std::vector<std::pair<double, double>>& scan);

/// Angular profile curve CSV: theta,g.
std::string curve_csv(const std::vector<std::pair<double, double>>& curve);

}  // namespace zeronoise

#endif
