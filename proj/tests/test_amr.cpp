/**
 * @file test_amr.cpp
 * @brief Marking, state transfer across refinement, and hanging-node
 *        consistency of the adaptive loop.
 */

#include <doctest.h>

#include <cmath>
#include <vector>

#include "pff/amr.hpp"
#include "pff/energy.hpp"
#include "pff/solver.hpp"
#include "helpers.hpp"

using namespace pff;

namespace {

AmrPolicy policy(double th, int depth) {
  AmrPolicy p;
  p.enabled = true;
  p.phi_threshold = th;
  p.max_depth = depth;
  return p;
}

}  // namespace

TEST_CASE("marking selects elements by corner phase and level") {
  HierMesh mesh = pfft::grid_mesh(2, 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * mesh.nodes.size());
  x[2 * mesh.nodes.size() + 1] = 0.5;  // shared bottom-middle node

  CHECK(mark_elements(mesh, x, 0.2, 4) == std::vector<int>{0, 1});
  CHECK(mark_elements(mesh, x, 0.6, 4).empty());  // strictly above
  CHECK(mark_elements(mesh, x, 0.2, 0).empty());  // already at depth

  mesh.refine({0});
  Eigen::VectorXd x2 = Eigen::VectorXd::Zero(3 * mesh.nodes.size());
  x2[2 * mesh.nodes.size() + 1] = 0.5;
  // The level-1 child touching the hot node is capped out; the coarse
  // neighbor is still eligible.
  CHECK(mark_elements(mesh, x2, 0.2, 1) == std::vector<int>{1});
}

TEST_CASE("refinement transfers both states and the history pair") {
  Model m;
  m.mesh = pfft::grid_mesh(2, 2, 1.0, 1.0);
  m.bcs = {{"bottom", 0, false, 0.0},
           {"bottom", 1, false, 0.0},
           {"top", 1, true, 1.0}};
  m.mat = pfft::simple_material();
  m.init_state();

  // Affine fields are reproduced exactly by the midpoint transfer; the
  // phase gradient puts only the top row above the marking threshold.
  auto phi_f = [](double x, double y) { return 0.2 + 0.1 * x + 0.3 * y; };
  auto fill = [&](Eigen::VectorXd& v, double lam) {
    for (int n = 0; n < m.dofs.n_nodes; ++n) {
      const double x = m.mesh.nodes[n].x, y = m.mesh.nodes[n].y;
      v[DofMap::udof(n, 0)] = 0.05 * y;
      v[DofMap::udof(n, 1)] = lam * y;
      v[m.dofs.pdof(n)] = phi_f(x, y);
    }
  };
  m.state.lambda = 0.4;
  m.state.lambda_n = 0.3;
  fill(m.state.x, 0.4);
  fill(m.state.x_n, 0.3);
  for (std::size_t e = 0; e < m.state.H.size(); ++e) {
    for (int qp = 0; qp < 4; ++qp) {
      m.state.H[e][qp] = 1.0 + static_cast<double>(e) + 0.1 * qp;
      m.state.H_n[e][qp] = 0.5 * m.state.H[e][qp];
    }
  }
  const std::vector<std::array<double, 4>> h_old = m.state.H;
  const std::vector<std::array<double, 4>> hn_old = m.state.H_n;
  const double area_before = m.mesh.total_active_area();

  int resolves = 0;
  const AmrOutcome out = amr_cycle(m, policy(0.5, 1), [&](Model&) {
    ++resolves;
    return true;
  });
  CHECK(out.cycles == 1);
  CHECK(!out.resolve_failed);
  CHECK(resolves == 1);
  CHECK(m.mesh.total_active_area() == doctest::Approx(area_before));
  CHECK(m.dofs.n_nodes == static_cast<int>(m.mesh.nodes.size()));

  // Only the top row exceeds the threshold.
  CHECK(m.mesh.elems[0].active);
  CHECK(m.mesh.elems[1].active);
  CHECK(!m.mesh.elems[2].active);
  CHECK(!m.mesh.elems[3].active);

  for (int n = 0; n < m.dofs.n_nodes; ++n) {
    const double x = m.mesh.nodes[n].x, y = m.mesh.nodes[n].y;
    CHECK(m.state.x[DofMap::udof(n, 0)] ==
          doctest::Approx(0.05 * y).epsilon(1e-12));
    CHECK(m.state.x[DofMap::udof(n, 1)] ==
          doctest::Approx(0.4 * y).epsilon(1e-12));
    CHECK(m.state.x[m.dofs.pdof(n)] ==
          doctest::Approx(phi_f(x, y)).epsilon(1e-12));
    CHECK(m.state.x_n[DofMap::udof(n, 1)] ==
          doctest::Approx(0.3 * y).epsilon(1e-12));
    CHECK(m.state.x_n[m.dofs.pdof(n)] ==
          doctest::Approx(phi_f(x, y)).epsilon(1e-12));
  }

  // Children inherit the quadrant Gauss value of their parent, old
  // elements keep theirs; the committed history moves along too.
  for (int p : {2, 3}) {
    for (int k = 0; k < 4; ++k) {
      const int c = m.mesh.elems[p].children[k];
      for (int qp = 0; qp < 4; ++qp) {
        CHECK(m.state.H[c][qp] == h_old[p][k]);
        CHECK(m.state.H_n[c][qp] == hn_old[p][k]);
      }
    }
  }
  for (int e : {0, 1}) {
    for (int qp = 0; qp < 4; ++qp) {
      CHECK(m.state.H[e][qp] == h_old[e][qp]);
      CHECK(m.state.H_n[e][qp] == hn_old[e][qp]);
    }
  }

  // Rollback stays meaningful on the refined mesh.
  m.state.rollback();
  CHECK((m.state.x - m.state.x_n).norm() == 0.0);
  CHECK(m.state.lambda == 0.3);
}

TEST_CASE("resolve failure is propagated") {
  Model m;
  m.mesh = pfft::grid_mesh(1, 1);
  m.bcs = {{"bottom", 1, false, 0.0}};
  m.mat = pfft::simple_material();
  m.init_state();
  for (int n = 0; n < m.dofs.n_nodes; ++n) m.state.x[m.dofs.pdof(n)] = 0.9;

  const AmrOutcome out =
      amr_cycle(m, policy(0.5, 2), [](Model&) { return false; });
  CHECK(out.resolve_failed);
  CHECK(out.cycles == 1);
}

TEST_CASE("hanging nodes pass the uniform stress patch test") {
  Model m;
  m.mesh = pfft::grid_mesh(2, 2);
  m.mesh.refine({0});
  m.mesh.refine({m.mesh.elems[0].children[2]});
  m.bcs = {{"left", 0, false, 0.0},
           {"bottom", 1, false, 0.0},
           {"right", 0, true, 1.0}};
  m.mat = pfft::simple_material();
  m.mat.lambda = 30.0;
  m.mat.gc = 1e14;  // keeps the phase field numerically zero
  m.init_state();

  SolveSettings cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 50;
  const double lam = 0.02;
  m.state.lambda = lam;
  m.dofs.apply(m.state.x, lam);
  const StepResult r = newton_displacement_step(m, cfg, 1.0);
  REQUIRE(r.converged);

  // Uniaxial stress: u = (a x, c y) with free lateral contraction.
  const double a = lam / 2.0;  // driven value over the strip length
  const double c = -m.mat.lambda / (m.mat.lambda + 2.0 * m.mat.mu) * a;
  for (int n = 0; n < m.dofs.n_nodes; ++n) {
    const double x = m.mesh.nodes[n].x, y = m.mesh.nodes[n].y;
    CHECK(std::abs(m.state.x[DofMap::udof(n, 0)] - a * x) <= 1e-10);
    CHECK(std::abs(m.state.x[DofMap::udof(n, 1)] - c * y) <= 1e-10);
  }
  const double sxx =
      4.0 * m.mat.mu * (m.mat.lambda + m.mat.mu) / (m.mat.lambda + 2.0 * m.mat.mu) * a;
  CHECK(r.load == doctest::Approx(sxx * 2.0).epsilon(1e-8));
}

TEST_CASE("adaptive run keeps the dissipation constraint on refined meshes") {
  Model m;
  m.mesh = pfft::grid_mesh(4, 2, 1.0, 1.0);
  m.bcs = {{"bottom", 0, false, 0.0},
           {"bottom", 1, false, 0.0},
           {"top", 1, true, 1.0}};
  m.mat = pfft::simple_material();
  m.init_state();

  SolveSettings cfg;
  cfg.tol = 1e-10;
  cfg.stepsize = 0.02;
  cfg.dtau_max = 1e-3;
  cfg.max_steps = 20;
  const RunResult rr = run_simulation(m, cfg, policy(0.05, 1));
  REQUIRE(!rr.aborted);
  REQUIRE(rr.history.size() == 20);
  CHECK(rr.phi_in_bounds);
  CHECK(rr.history_monotone);

  // The homogeneous phase crosses the threshold, so the mesh refines
  // mid-run and the arc constraint still holds on the new mesh.
  CHECK(rr.history.back().ndof > rr.history.front().ndof);
  for (const StepRecord& rec : rr.history) {
    if (rec.mode != StepMode::arclength) continue;
    CHECK(std::abs(rec.dG - rec.dtau) <= std::max(1e-3 * rec.dtau, 1e-12));
  }
  CHECK(mark_elements(m.mesh, m.state.x, 0.05, 1).empty());
}
