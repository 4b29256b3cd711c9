/**
 * @file solver.hpp
 * @brief Monolithic arc-length solver with adaptive under-relaxation, and
 *        the staggered reference solver.
 *
 * A run starts under displacement control. Once the dissipation increment
 * of a converged step reaches switch_energy the controller moves to
 * arc-length control: the load factor becomes an unknown and each step
 * dissipates a prescribed fracture-energy increment dtau, adapted from the
 * iteration count. Failed steps roll back; under displacement control the
 * step size shrinks tenfold, under arc-length control the under-relaxation
 * factor (and eventually dtau) is cut until the floors are reached.
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pff/amr.hpp"
#include "pff/model.hpp"

namespace pff {

enum class SolverKind { monolithic, monolithic_no_relax, staggered };

struct SolveSettings {
  SolverKind kind = SolverKind::monolithic;
  double tol = 1e-3;          // residual 2-norm
  int max_iter = 25;
  double stepsize = 1e-3;     // initial load-factor increment
  double dtau_max = 0.025;
  double switch_energy = -1.0;  // < 0: dtau_max / 10
  int optiter = 5;
  double dtau_grow = 2.0;
  double dtau_shrink_base = 0.5;
  double dtau_shrink_exp = 0.25;
  double beta_grow = 1.05;
  double beta_cut = 1.25;
  double beta_floor = 1e-3;
  double dlambda_floor = 1e-10;
  double dtau_floor = 1e-14;
  int max_steps = 400;
  double lambda_max = 1e30;
  double g_final = 1e30;      // stop once total fracture energy reaches this
  int threads = 1;
  // staggered control
  double stagger_tol = 1e-4;
  int stagger_max = 200;

  double effective_switch_energy() const {
    return switch_energy < 0.0 ? dtau_max / 10.0 : switch_energy;
  }
};

enum class StepMode { displacement, arclength };

struct StepRecord {
  int step = 0;
  double lambda = 0.0;
  double load = 0.0;
  double dG = 0.0;
  int iterations = 0;
  double beta = 1.0;
  double dtau = 0.0;
  StepMode mode = StepMode::displacement;
  int ndof = 0;
};

struct StepResult {
  bool converged = false;
  int iterations = 0;
  double load = 0.0;  // reaction at the converged state
};

// One Newton solve at fixed load factor (already applied to the state).
// Updates state fields and history in place; no commit or rollback.
StepResult newton_displacement_step(Model& model, const SolveSettings& cfg,
                                    double beta);

// One bordered Newton solve: load factor free, dissipation increment pinned
// to dtau. Convergence needs the field residual below tol and
// |dG - dtau| <= max(1e-3 dtau, 1e-12).
StepResult arc_length_step(Model& model, const SolveSettings& cfg, double beta,
                           double dtau);

// Alternating u/phi reference solve at fixed load factor: converged
// subproblem solves until the combined field increment per sweep drops
// below stagger_tol. Same history update as the monolithic path.
StepResult staggered_step(Model& model, const SolveSettings& cfg);

struct RunResult {
  std::vector<StepRecord> history;
  bool aborted = false;
  std::string abort_reason;
  // Sanity flags accumulated over the run (checked after every commit).
  bool history_monotone = true;
  bool phi_in_bounds = true;
};

using StepObserver = std::function<void(const Model&, const StepRecord&)>;

// Drives the full load history per the control scheme above, including the
// AMR hook after each converged step. The observer fires once per recorded
// step, after commit.
RunResult run_simulation(Model& model, const SolveSettings& cfg,
                         const AmrPolicy& amr, const StepObserver& observer = {});

}  // namespace pff
