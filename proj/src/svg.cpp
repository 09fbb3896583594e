#include "zeronoise/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace zeronoise {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct Box {
  double x0, y0, x1, y1;  // data range
  double px, py, pw, ph;  // pixel rectangle
  double sx(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double sy(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

void polyline(std::ostringstream& out, const Box& b,
              const std::vector<std::pair<double, double>>& pts, const char* style) {
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (const auto& [x, y] : pts) out << fmt(b.sx(x)) << ',' << fmt(b.sy(y)) << ' ';
  out << "\"/>\n";
}

void axes(std::ostringstream& out, const Box& b) {
  out << "<rect x=\"" << fmt(b.px) << "\" y=\"" << fmt(b.py) << "\" width=\"" << fmt(b.pw)
      << "\" height=\"" << fmt(b.ph)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
}

void label(std::ostringstream& out, double x, double y, const std::string& text) {
  out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">" << text
      << "</text>\n";
}

}  // namespace

std::string render_profile_figure(const std::vector<std::pair<double, double>>& g_curve,
                                  const std::vector<std::pair<double, double>>& lap_curve) {
  const double W = 640, H = 540;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";

  auto range = [](const std::vector<std::pair<double, double>>& c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [x, y] : c) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    double pad = 0.05 * (hi - lo);
    return std::pair<double, double>{lo - pad, hi + pad};
  };

  if (!g_curve.empty()) {
    auto [ylo, yhi] = range(g_curve);
    Box top{g_curve.front().first, ylo, g_curve.back().first, yhi, 50, 30, W - 80, 200};
    axes(out, top);
    label(out, 50, 22, "angular profile g(theta)");
    polyline(out, top, g_curve, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
  }
  if (!lap_curve.empty()) {
    auto [ylo, yhi] = range(lap_curve);
    ylo = std::min(ylo, 0.0);
    Box bot{lap_curve.front().first, ylo, lap_curve.back().first, yhi, 50, 300, W - 80, 200};
    axes(out, bot);
    label(out, 50, 292, "(1+alpha)^2 g + g'' (boundary Laplacian)");
    if (ylo < 0.0 && yhi > 0.0) {
      std::vector<std::pair<double, double>> zero = {{lap_curve.front().first, 0.0},
                                                     {lap_curve.back().first, 0.0}};
      polyline(out, bot, zero, "stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
    }
    polyline(out, bot, lap_curve, "stroke=\"#d62728\" stroke-width=\"1.5\"");
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_paths_figure(const std::vector<PathPanel>& panels,
                                const std::vector<double>& ray_angles, double rho_exit) {
  const int cols = panels.size() >= 4 ? 2 : 1;
  const int rows = static_cast<int>((panels.size() + cols - 1) / cols);
  const double cell = 300, margin = 20;
  const double W = cols * cell + margin, H = rows * cell + margin;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    int col = static_cast<int>(p) % cols;
    int row = static_cast<int>(p) / cols;
    double lim = 1.2 * rho_exit;
    Box b{-lim, -lim, lim, lim, margin / 2 + col * cell, margin / 2 + row * cell,
          cell - margin, cell - margin};
    axes(out, b);
    {
      std::ostringstream title;
      title << "epsilon = " << panels[p].epsilon;
      label(out, b.px + 6, b.py + 16, title.str());
    }
    // Measurement circle R = rho_exit.
    out << "<circle cx=\"" << fmt(b.sx(0)) << "\" cy=\"" << fmt(b.sy(0)) << "\" r=\""
        << fmt(rho_exit / (2 * lim) * b.pw)
        << "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    // Expected exit directions: thick rays from the origin.
    for (double th : ray_angles) {
      std::vector<std::pair<double, double>> ray = {
          {0.0, 0.0}, {lim * std::cos(th), lim * std::sin(th)}};
      polyline(out, b, ray, "stroke=\"#cc0000\" stroke-width=\"3\" stroke-opacity=\"0.8\"");
    }
    for (const auto& path : panels[p].paths)
      polyline(out, b, path, "stroke=\"#333333\" stroke-width=\"0.8\"");
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace zeronoise
