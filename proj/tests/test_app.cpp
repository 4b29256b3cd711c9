/**
 * @file test_app.cpp
 * @brief Config layer, preset geometries, writers and the CLI contract.
 */

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pff/config.hpp"
#include "pff/output.hpp"
#include "helpers.hpp"

using namespace pff;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pff_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("preset names round-trip") {
  for (PresetKind k : {PresetKind::tbt, PresetKind::eh, PresetKind::sent,
                       PresetKind::sens, PresetKind::rect}) {
    CHECK(parse_preset(preset_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_preset("nope"), ConfigError);
}

TEST_CASE("preset defaults") {
  const RunConfig tbt = preset_config(PresetKind::tbt);
  CHECK(tbt.geo.nx == 40);
  CHECK(tbt.geo.ny == 8);
  CHECK(tbt.mat.mu == 50.0);
  CHECK(tbt.mat.lambda == 0.0);
  CHECK(tbt.mat.ell == 0.25);
  CHECK(tbt.mat.split == Split::none);
  CHECK(tbt.solve.stepsize == 1e-2);
  CHECK(tbt.solve.dtau_max == 0.0125);
  CHECK(tbt.solve.lambda_max == 0.60);
  CHECK(tbt.amr.max_depth == 4);

  const RunConfig eh = preset_config(PresetKind::eh);
  CHECK(eh.mat.lambda == 121154.0);
  CHECK(eh.mat.split == Split::rankine);
  CHECK(eh.geo.hole_r == doctest::Approx(0.2));
  CHECK(eh.solve.lambda_max == 0.05);

  const RunConfig sent = preset_config(PresetKind::sent);
  CHECK(sent.geo.pre_refine == 1);
  CHECK(sent.geo.notch_length == doctest::Approx(0.5));
  CHECK(sent.mat.split == Split::none);
  CHECK(sent.solve.dtau_max == 0.025);

  const RunConfig sens = preset_config(PresetKind::sens);
  CHECK(sens.mat.split == Split::rankine);
  CHECK(sens.solve.stepsize == 5e-4);

  const RunConfig rect = preset_config(PresetKind::rect);
  CHECK(!rect.amr.enabled);
}

TEST_CASE("config text parsing") {
  const RunConfig base = preset_config(PresetKind::rect);

  SUBCASE("sections, comments and types") {
    const RunConfig cfg = load_config_text(
        "# comment\n"
        "; also a comment\n"
        "[geometry]\n"
        "nx = 12\n"
        "\n"
        "[material]\n"
        "mu = 3.5\n"
        "split = spectral\n"
        "[solver]\n"
        "type = staggered\n"
        "max_steps = 7\n"
        "[amr]\n"
        "enabled = true\n"
        "[output]\n"
        "vtk_every = 0\n",
        base);
    CHECK(cfg.geo.nx == 12);
    CHECK(cfg.mat.mu == 3.5);
    CHECK(cfg.mat.split == Split::spectral);
    CHECK(cfg.solve.kind == SolverKind::staggered);
    CHECK(cfg.solve.max_steps == 7);
    CHECK(cfg.amr.enabled);
    CHECK(cfg.out.vtk_every == 0);
  }

  SUBCASE("a preset key rebases before the other keys apply") {
    const RunConfig cfg = load_config_text(
        "[solver]\n"
        "stepsize = 9e-3\n"
        "[geometry]\n"
        "preset = tbt\n"
        "nx = 10\n",
        base);
    CHECK(cfg.geo.preset == PresetKind::tbt);
    CHECK(cfg.geo.nx == 10);           // override survives
    CHECK(cfg.geo.ny == 8);            // preset default
    CHECK(cfg.solve.stepsize == 9e-3); // earlier key still wins over the preset
    CHECK(cfg.solve.dtau_max == 0.0125);
  }

  SUBCASE("errors carry line numbers") {
    auto msg = [&](const std::string& text) {
      try {
        load_config_text(text, base);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(msg("[geometry]\nbogus = 1\n").find("line 2") != std::string::npos);
    // Unknown sections are reported where a key first uses them.
    CHECK(msg("[nosuch]\nnx = 1\n").find("line 2") != std::string::npos);
    CHECK(msg("[nosuch]\nnx = 1\n").find("nosuch") != std::string::npos);
    CHECK(msg("[geometry]\nnx\n").find("line 2") != std::string::npos);
    CHECK(msg("[geometry]\nnx = abc\n").find("line 2") != std::string::npos);
    CHECK(msg("nx = 1\n").find("line 1") != std::string::npos);  // outside any section
  }
}

TEST_CASE("overrides and validation") {
  RunConfig cfg = preset_config(PresetKind::rect);
  apply_setting(cfg, "solver", "type", "monolithic-no-relax", -1);
  CHECK(cfg.solve.kind == SolverKind::monolithic_no_relax);
  apply_setting(cfg, "amr", "enabled", "false", -1);
  CHECK(!cfg.amr.enabled);
  apply_setting(cfg, "material", "degradation", "cubic", -1);
  CHECK(cfg.mat.degradation == Degradation::cubic);
  CHECK_THROWS_AS(apply_setting(cfg, "solver", "type", "magic", -1),
                  ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "material", "mu", "fast", -1),
                  ConfigError);

  validate_config(cfg);
  SUBCASE("material ranges") {
    cfg.mat.gc = -1.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  }
  SUBCASE("solver ranges") {
    cfg.solve.tol = 0.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  }
  SUBCASE("notch must land on an interior grid line") {
    RunConfig sent = preset_config(PresetKind::sent);
    sent.geo.ny = 31;  // odd: no mid-height node row
    CHECK_THROWS_AS(validate_config(sent), ConfigError);
    sent = preset_config(PresetKind::sent);
    sent.geo.notch_length = 2.0;  // reaches past the right edge
    CHECK_THROWS_AS(validate_config(sent), ConfigError);
  }
  SUBCASE("hole must stay strictly inside the plate") {
    RunConfig eh = preset_config(PresetKind::eh);
    eh.geo.hole_r = 0.7;
    CHECK_THROWS_AS(validate_config(eh), ConfigError);
  }
}

TEST_CASE("history csv format") {
  CHECK(csv_header() ==
        "step,lambda_mm,load_N,delta_G,iterations,beta,delta_tau,mode,ndof");

  StepRecord rec;
  rec.step = 3;
  rec.lambda = 0.012345678901234567;
  rec.load = -2.5;
  rec.dG = 1e-9;
  rec.iterations = 7;
  rec.beta = 0.8;
  rec.dtau = 0.025;
  rec.mode = StepMode::arclength;
  rec.ndof = 420;
  const std::string row = csv_row(rec);
  CHECK(row.find("arclength") != std::string::npos);
  CHECK(row.find("420") != std::string::npos);
  int commas = 0;
  for (char c : row)
    if (c == ',') ++commas;
  CHECK(commas == 8);
  // Shortest round-trip formatting: the exact double comes back.
  std::istringstream ss(row.substr(row.find(',') + 1));
  double lam = 0.0;
  ss >> lam;
  CHECK(lam == rec.lambda);

  rec.mode = StepMode::displacement;
  CHECK(csv_row(rec).find("displacement") != std::string::npos);

  const fs::path dir = fresh_dir("csv");
  write_history_csv({rec, rec}, (dir / "h.csv").string());
  std::string text = slurp(dir / "h.csv");
  CHECK(count_lines(text) == 3);

  {
    HistoryCsv inc((dir / "inc.csv").string());
    inc.append(rec);
  }
  text = slurp(dir / "inc.csv");
  CHECK(count_lines(text) == 2);
  CHECK(text.find(csv_header()) == 0);
}

TEST_CASE("vtk writers dump the active mesh") {
  HierMesh mesh = pfft::grid_mesh(2, 2);
  mesh.refine({0});
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * mesh.nodes.size());
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    x[2 * mesh.nodes.size() + n] = 0.5;

  const fs::path dir = fresh_dir("vtk");
  write_fields_vtk(mesh, x, (dir / "f.vtk").string());
  const std::string text = slurp(dir / "f.vtk");
  CHECK(text.find("POINTS " + std::to_string(mesh.nodes.size())) !=
        std::string::npos);
  CHECK(text.find("CELLS " + std::to_string(mesh.active_count())) !=
        std::string::npos);
  CHECK(text.find("VECTORS displacement") != std::string::npos);
  CHECK(text.find("SCALARS phi") != std::string::npos);
  CHECK(text.find("CELL_DATA " + std::to_string(mesh.active_count())) !=
        std::string::npos);

  write_mesh_vtk(mesh, (dir / "m.vtk").string());
  const std::string geo = slurp(dir / "m.vtk");
  CHECK(geo.find("CELLS " + std::to_string(mesh.active_count())) !=
        std::string::npos);
  CHECK(geo.find("VECTORS") == std::string::npos);
}

TEST_CASE("tapered bar geometry") {
  RunConfig cfg = preset_config(PresetKind::tbt);
  apply_setting(cfg, "geometry", "nx", "10", -1);
  apply_setting(cfg, "geometry", "ny", "2", -1);
  const Model m = build_model(cfg);

  // Width grows linearly from the fixed to the loaded end.
  for (const Node& n : m.mesh.nodes) {
    const double half = 0.5 * (0.75 + (2.0 - 0.75) * n.x / 5.0);
    CHECK(std::abs(n.y) <= half + 1e-12);
  }
  const double area = 5.0 * 0.5 * (0.75 + 2.0);
  CHECK(m.mesh.total_active_area() == doctest::Approx(area).epsilon(1e-12));
  REQUIRE(m.bcs.size() == 3);
  CHECK(m.bcs[2].driven);
}

TEST_CASE("holed plate geometry snaps the rim onto the circle") {
  RunConfig cfg = preset_config(PresetKind::eh);
  Model m = build_model(cfg);
  const int hole = m.mesh.find_tag("hole");
  REQUIRE(hole >= 0);

  const auto on_circle = [&](const Model& mod) {
    int rim = 0;
    for (const Node& n : mod.mesh.nodes) {
      if (!(n.tags >> hole & 1u)) continue;
      const double d = std::hypot(n.x - cfg.geo.hole_cx, n.y - cfg.geo.hole_cy);
      CHECK(d == doctest::Approx(cfg.geo.hole_r).epsilon(1e-9));
      ++rim;
    }
    return rim;
  };
  const int rim0 = on_circle(m);
  CHECK(rim0 >= 8);
  CHECK(m.mesh.active_count() <
        cfg.geo.nx * cfg.geo.ny);  // cells inside the hole are gone
  REQUIRE(m.mesh.snap.has_value());
  CHECK(m.mesh.snap->r == doctest::Approx(cfg.geo.hole_r));

  // Refining the rim adds midpoints that land on the circle again, so the
  // polygon converges to the hole under refinement.
  std::vector<int> rim_elems;
  for (int e : m.mesh.active_elems()) {
    for (int c : m.mesh.elems[e].corners) {
      if (m.mesh.nodes[c].tags >> hole & 1u) {
        rim_elems.push_back(e);
        break;
      }
    }
  }
  m.mesh.refine(rim_elems);
  CHECK(on_circle(m) > rim0);
}

TEST_CASE("notched plate duplicates the crack faces") {
  RunConfig cfg = preset_config(PresetKind::sent);
  apply_setting(cfg, "geometry", "nx", "8", -1);
  apply_setting(cfg, "geometry", "ny", "8", -1);
  apply_setting(cfg, "geometry", "pre_refine", "0", -1);
  const Model m = build_model(cfg);

  // Grid nodes plus one duplicate per slit node left of the tip.
  CHECK(m.mesh.nodes.size() == 81 + 4);
  int at_tip = 0, on_slit_pairs = 0;
  for (std::size_t a = 0; a < m.mesh.nodes.size(); ++a) {
    const Node& n = m.mesh.nodes[a];
    if (std::abs(n.y - 0.5) > 1e-12) continue;
    if (std::abs(n.x - 0.5) < 1e-12) ++at_tip;
    for (std::size_t b = a + 1; b < m.mesh.nodes.size(); ++b) {
      const Node& o = m.mesh.nodes[b];
      if (std::abs(o.x - n.x) < 1e-12 && std::abs(o.y - n.y) < 1e-12)
        ++on_slit_pairs;
    }
  }
  CHECK(at_tip == 1);        // the tip is shared
  CHECK(on_slit_pairs == 4); // x = 0, 1/8, 2/8, 3/8 at mid height

  // The flanks really are disconnected: elements above and below the slit
  // share no node left of the tip.
  RunConfig pre = preset_config(PresetKind::sent);
  apply_setting(pre, "geometry", "nx", "8", -1);
  apply_setting(pre, "geometry", "ny", "8", -1);
  const Model mp = build_model(pre);
  CHECK(mp.mesh.active_count() > 64);  // tip neighborhood pre-refined
}

TEST_CASE("shear plate boundary conditions") {
  RunConfig cfg = preset_config(PresetKind::sens);
  apply_setting(cfg, "geometry", "nx", "8", -1);
  apply_setting(cfg, "geometry", "ny", "8", -1);
  apply_setting(cfg, "geometry", "pre_refine", "0", -1);
  const Model m = build_model(cfg);
  REQUIRE(m.bcs.size() == 5);
  int driven = 0;
  for (const DirichletSpec& bc : m.bcs) {
    if (!bc.driven) continue;
    ++driven;
    CHECK(bc.tag == "top");
    CHECK(bc.comp == 0);  // sliding, not opening
  }
  CHECK(driven == 1);
}

#ifdef PFF_BIN
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PFF_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli contract") {
  const fs::path dir = fresh_dir("cli");

  SUBCASE("a tiny run writes history and final fields") {
    const fs::path out = dir / "ok";
    CHECK(run_cli("run --preset rect --set solver.max_steps=2 "
                  "--set output.vtk_every=0 --out " + out.string()) == 0);
    CHECK(count_lines(slurp(out / "history.csv")) == 3);
    CHECK(fs::exists(out / "final.vtk"));
  }
  SUBCASE("configuration errors exit with 2") {
    CHECK(run_cli("run --preset rect --config /nonexistent.ini --out " +
                  (dir / "a").string()) == 2);
    CHECK(run_cli("run --preset rect --set solver.type=bogus --out " +
                  (dir / "b").string()) == 2);
    CHECK(run_cli("run --preset rect --set nonsense --out " +
                  (dir / "c").string()) == 2);
    CHECK(run_cli("run --preset rect") == 2);  // --out is required
  }
  SUBCASE("an aborted run exits with 3 but keeps its partial history") {
    const fs::path out = dir / "abort";
    CHECK(run_cli("run --preset rect --set solver.tolerance=1e-300 "
                  "--set solver.max_steps=4 --out " + out.string()) == 3);
    CHECK(fs::exists(out / "history.csv"));
  }
}
#endif
