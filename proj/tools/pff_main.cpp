/**
 * @file pff_main.cpp
 * @brief Command-line driver: configure a preset, run it, write artifacts.
 */

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pff/config.hpp"
#include "pff/output.hpp"
#include "pff/solver.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pff::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_cli_set(pff::RunConfig& cfg, const std::string& kv) {
  const std::size_t eq = kv.find('=');
  if (eq == std::string::npos) {
    throw pff::ConfigError("--set expects section.key=value, got '" + kv + "'");
  }
  const std::string key = kv.substr(0, eq);
  const std::size_t dot = key.find('.');
  if (dot == std::string::npos) {
    throw pff::ConfigError("--set expects section.key=value, got '" + kv + "'");
  }
  pff::apply_setting(cfg, key.substr(0, dot), key.substr(dot + 1),
                     kv.substr(eq + 1), -1);
}

int env_threads() {
  const char* v = std::getenv("PFF_THREADS");
  if (!v || !*v) return 0;
  const int t = std::atoi(v);
  return t >= 1 ? t : 0;
}

std::string step_path(const std::string& dir, int step) {
  char name[32];
  std::snprintf(name, sizeof(name), "step_%04d.vtk", step);
  return dir + "/" + name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-static phase-field fracture solver"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a configured simulation");
  std::string preset;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  run->add_option("--preset", preset, "geometry preset: tbt, eh, sent, sens, rect");
  run->add_option("--config", config_path, "INI-style config file");
  run->add_option("--set", sets, "override, e.g. solver.max_steps=10")
      ->take_all();
  run->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  pff::RunResult result;
  try {
    pff::RunConfig cfg;
    if (!preset.empty()) cfg = pff::preset_config(pff::parse_preset(preset));
    if (!config_path.empty()) cfg = pff::load_config_text(read_file(config_path), cfg);
    for (const std::string& kv : sets) apply_cli_set(cfg, kv);
    if (const int t = env_threads()) cfg.solve.threads = t;
    pff::validate_config(cfg);

    pff::Model model = pff::build_model(cfg);

    std::filesystem::create_directories(out_dir);
    if (cfg.out.mesh_vtk) pff::write_mesh_vtk(model.mesh, out_dir + "/mesh.vtk");
    pff::HistoryCsv csv(out_dir + "/history.csv");

    const int every = cfg.out.vtk_every;
    const pff::StepObserver observer = [&](const pff::Model& m,
                                           const pff::StepRecord& rec) {
      csv.append(rec);
      if (every > 0 && rec.step % every == 0) {
        pff::write_fields_vtk(m.mesh, m.state.x, step_path(out_dir, rec.step));
      }
    };

    result = pff::run_simulation(model, cfg.solve, cfg.amr, observer);
    pff::write_fields_vtk(model.mesh, model.state.x, out_dir + "/final.vtk");

    std::cout << "steps: " << result.history.size();
    if (!result.history.empty()) {
      const pff::StepRecord& last = result.history.back();
      std::cout << ", final lambda: " << last.lambda
                << ", final load: " << last.load << ", ndof: " << last.ndof;
    }
    std::cout << "\n";
    if (!result.history_monotone) {
      std::cerr << "warning: history field decreased somewhere\n";
    }
    if (!result.phi_in_bounds) {
      std::cerr << "warning: phase field left [0,1] before clamping\n";
    }
  } catch (const pff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  if (result.aborted) {
    std::cerr << "aborted: " << result.abort_reason << "\n";
    return 3;
  }
  return 0;
}
