// Batch front door: validate models, run flows / single paths / ensembles,
// and render the report figures from previously emitted result files.
//
// Exit codes: 0 success, 1 assumption failure, 2 bad configuration,
// 3 missing inputs, 4 runtime failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeronoise/assumptions.hpp"
#include "zeronoise/config.hpp"
#include "zeronoise/errors.hpp"
#include "zeronoise/io.hpp"
#include "zeronoise/montecarlo.hpp"
#include "zeronoise/svg.hpp"

namespace fs = std::filesystem;
using namespace zeronoise;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
  bool verbose = false;
  std::vector<std::string> overrides;
};

ExperimentConfig load_config(const GlobalArgs& g) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) cfg = ExperimentConfig::load(g.config_path);
  for (const auto& ov : g.overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects section.key=value, got '" + ov + "'");
    cfg.apply_override(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.seed >= 0) cfg.seed = static_cast<std::uint64_t>(g.seed);
  if (g.workers > 0) cfg.workers = g.workers;
  if (cfg.workers <= 0)
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  return cfg;
}

void ensure_out(const ExperimentConfig& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

int cmd_validate(const ExperimentConfig& cfg, bool verbose) {
  PotentialModel model = cfg.make_model();
  ensure_out(cfg);
  ValidationReport ra = check_assumption_A(model);
  ValidationReport rb = check_assumption_B(model);
  write_text_file(out_path(cfg, "validation_A.json"), ra.to_json());
  write_text_file(out_path(cfg, "validation_B.json"), rb.to_json());
  write_text_file(out_path(cfg, "witnesses_A.csv"), ra.witnesses_csv());
  write_text_file(out_path(cfg, "witnesses_B.csv"), rb.witnesses_csv());
  if (model.dimension() == 2 && model.profile().is_planar()) {
    auto scan = boundary_laplacian_scan(model, 512);
    write_text_file(out_path(cfg, "laplacian_scan.csv"), scan_csv(scan));
    const auto& gp = static_cast<const PlanarProfile&>(model.profile());
    std::vector<std::pair<double, double>> curve;
    for (int i = 0; i < 512; ++i) {
      double th = gp.theta0() + (gp.theta1() - gp.theta0()) * i / 511.0;
      curve.emplace_back(th, gp.g(th));
    }
    write_text_file(out_path(cfg, "profile_curve.csv"), curve_csv(curve));
  }
  bool ok = ra.all_pass() && rb.all_pass();
  if (verbose || !ok) {
    for (const auto* rep : {&ra, &rb})
      for (const auto& c : rep->checks)
        std::cout << c.id << ": " << to_string(c.verdict)
                  << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  }
  std::cout << (ok ? "validation passed" : "validation FAILED") << "\n";
  return ok ? 0 : 1;
}

int cmd_flow(const ExperimentConfig& cfg) {
  PotentialModel model = cfg.make_model();
  ensure_out(cfg);
  Vec u0;
  if (model.dimension() == 2) {
    u0 = {std::cos(cfg.flow_theta0), std::sin(cfg.flow_theta0)};
  } else {
    u0.assign(model.dimension(), 0.0);
    u0[0] = 1.0;
  }
  FlowPath path = integrate_flow(model.profile(), u0, cfg.flow_t_end, cfg.flow_dt);
  write_text_file(out_path(cfg, "flow.csv"), flow_csv(path));
  std::cout << "flow: " << path.times.size() << " samples, terminal theta = "
            << path.theta_values.back() << "\n";
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  PotentialModel model = cfg.make_model();
  ensure_out(cfg);
  SimConfig sim = cfg.make_sim_base();
  if (!cfg.epsilons.empty()) sim.epsilon = cfg.epsilons.front();
  if (cfg.record_dt > 0.0)
    sim.record_stride = std::max(1, static_cast<int>(std::llround(cfg.record_dt / sim.step())));
  auto [rec, st] = simulate_path(model, sim);
  write_text_file(out_path(cfg, "path.csv"), path_csv(rec));
  write_text_file(out_path(cfg, "stopping.json"), stopping_json(st));
  std::cout << "path: " << rec.times.size() << " samples, failed_exit = "
            << (detect_failed_exit(rec, sim) ? "true" : "false") << "\n";
  return 0;
}

int cmd_ensemble(const ExperimentConfig& cfg, bool verbose) {
  PotentialModel model = cfg.make_model();
  ensure_out(cfg);
  SimConfig base = cfg.make_sim_base();
  EnsembleOptions opt = cfg.make_ensemble_options();
  CriticalSets sets;
  bool have_sets = false;
  try {
    sets = find_critical_sets(model.profile(), 2048);
    have_sets = !sets.degenerate && !sets.maxima.empty();
  } catch (const ConfigError&) {
  }
  if (have_sets) opt.critical = &sets;
  opt.keep_records = cfg.per_path;
  opt.keep_first = 12;

  EnsembleStats stats =
      run_ensemble(model, base, cfg.epsilons, cfg.n_paths, cfg.workers, opt);
  write_text_file(out_path(cfg, "ensemble.json"), stats.to_json());

  std::ostringstream table;
  table << "epsilon,t_eps,n_paths,n_exited,n_failed_exit,n_anomalies,n_tau_hit,"
           "p_direction,p_escape_rate,p_g_positive,tau_median,tau_scaled_median,"
           "median_block_deviation\n";
  for (const auto& es : stats.per_epsilon) {
    table << es.epsilon << ',' << es.t_eps << ',' << es.n_paths << ',' << es.n_exited << ','
          << es.n_failed_exit << ',' << es.n_anomalies << ',' << es.n_tau_hit << ','
          << es.p_direction << ',' << es.p_escape_rate << ',' << es.p_g_positive << ','
          << es.tau_quantiles[2] << ',' << es.tau_scaled_quantiles[2] << ','
          << es.median_block_deviation << '\n';
    if (verbose)
      std::cout << "eps=" << es.epsilon << " exited=" << es.n_exited << "/" << es.n_paths
                << " p_dir=" << es.p_direction << " tau_med=" << es.tau_quantiles[2] << "\n";
  }
  write_text_file(out_path(cfg, "ensemble_summary.csv"), table.str());

  if (cfg.per_path) {
    for (std::size_t e = 0; e < stats.kept_records.size(); ++e)
      for (std::size_t i = 0; i < stats.kept_records[e].size(); ++i) {
        std::ostringstream name;
        name << "path_e" << e << "_p" << i << ".csv";
        write_text_file(out_path(cfg, name.str()), path_csv(stats.kept_records[e][i]));
      }
  }
  std::cout << "ensemble: " << cfg.epsilons.size() << " epsilon(s) x " << cfg.n_paths
            << " paths written to " << cfg.out_dir << "\n";
  return 0;
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path, int xcol,
                                                           int ycol) {
  std::string text = read_text_file(path);
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ls, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        cells.push_back(0.0);
      }
    }
    if (static_cast<int>(cells.size()) > std::max(xcol, ycol))
      out.emplace_back(cells[xcol], cells[ycol]);
  }
  return out;
}

int cmd_report(const ExperimentConfig& cfg) {
  const std::string scan_path = out_path(cfg, "laplacian_scan.csv");
  const std::string curve_path = out_path(cfg, "profile_curve.csv");
  const std::string valid_path = out_path(cfg, "validation_A.json");
  const std::string ens_path = out_path(cfg, "ensemble.json");
  if (!fs::exists(scan_path) || !fs::exists(curve_path) || !fs::exists(valid_path))
    throw ConfigError("report: missing validation outputs in '" + cfg.out_dir +
                      "' (run validate first)");

  auto g_curve = read_two_column_csv(curve_path, 0, 1);
  auto lap_curve = read_two_column_csv(scan_path, 0, 1);
  write_text_file(out_path(cfg, "figure_profile.svg"),
                  render_profile_figure(g_curve, lap_curve));

  std::vector<double> rays;
  {
    auto j = nlohmann::json::parse(read_text_file(valid_path));
    if (j.contains("critical") && j["critical"].contains("maxima_angles"))
      for (const auto& v : j["critical"]["maxima_angles"]) rays.push_back(v.get<double>());
  }

  if (fs::exists(ens_path)) {
    auto j = nlohmann::json::parse(read_text_file(ens_path));
    std::vector<PathPanel> panels;
    for (std::size_t e = 0; e < j["per_epsilon"].size(); ++e) {
      PathPanel panel;
      panel.epsilon = j["per_epsilon"][e]["epsilon"].get<double>();
      for (int i = 0;; ++i) {
        std::ostringstream name;
        name << "path_e" << e << "_p" << i << ".csv";
        std::string p = out_path(cfg, name.str());
        if (!fs::exists(p)) break;
        auto pts = read_two_column_csv(p, 1, 2);
        // Decimate long paths for a compact figure.
        if (pts.size() > 800) {
          std::vector<std::pair<double, double>> dec;
          std::size_t stride = pts.size() / 800 + 1;
          for (std::size_t k = 0; k < pts.size(); k += stride) dec.push_back(pts[k]);
          dec.push_back(pts.back());
          pts = std::move(dec);
        }
        panel.paths.push_back(std::move(pts));
      }
      panels.push_back(std::move(panel));
    }
    bool any_paths = false;
    for (const auto& p : panels) any_paths |= !p.paths.empty();
    if (!any_paths)
      throw ConfigError("report: no per-path CSVs found (run ensemble with output.per_path)");
    write_text_file(out_path(cfg, "figure_paths.svg"),
                    render_paths_figure(panels, rays, cfg.rho_exit));
  }
  std::cout << "report written to " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeronoise: small-noise gradient-SDE simulator and verifier"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "experiment config file");
  app.add_option("--out", g.out_dir, "output directory (overrides config)");
  app.add_option("--seed", g.seed, "RNG seed (overrides config)");
  app.add_option("--workers", g.workers, "worker threads (overrides config)");
  app.add_flag("--verbose", g.verbose, "chatty progress output");
  app.add_option("--set", g.overrides, "override a config key: section.key=value");

  auto* validate = app.add_subcommand("validate", "check assumptions on the model");
  auto* flow = app.add_subcommand("flow", "integrate the deterministic sphere flow");
  auto* simulate = app.add_subcommand("simulate", "simulate a single path");
  auto* ensemble = app.add_subcommand("ensemble", "run the Monte Carlo ladder");
  auto* report = app.add_subcommand("report", "render SVG figures from results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentConfig cfg = load_config(g);
    if (validate->parsed()) return cmd_validate(cfg, g.verbose);
    if (flow->parsed()) return cmd_flow(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (ensemble->parsed()) return cmd_ensemble(cfg, g.verbose);
    if (report->parsed()) {
      try {
        return cmd_report(cfg);
      } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
