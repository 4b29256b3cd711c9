/**
 * @file solver.cpp
 * @brief Monolithic Newton steps, arc-length steps and the run controller.
 */

#include "pff/solver.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "pff/assembly.hpp"
#include "pff/energy.hpp"

namespace pff {

namespace {

constexpr double kArcTolRel = 1e-3;
constexpr double kArcTolAbs = 1e-12;

struct IterationOutcome {
  bool converged = false;
  int iterations = 0;
  double load = 0.0;
};

// Shared Newton loop. Bordered mode appends the load-factor column and the
// dissipation-constraint row; convergence then also requires the constraint
// to be met. The iteration count equals the number of linear solves.
IterationOutcome newton_loop(Model& model, const SolveSettings& cfg,
                             double beta, bool bordered, double dtau) {
  SimState& st = model.state;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

  for (int it = 0;; ++it) {
    GlobalSystem sys;
    try {
      sys = assemble_global(model.mesh, model.dofs, model.mat, st.x, st.x_n,
                            st.H_n, bordered, dtau, cfg.threads);
    } catch (const AssemblyError&) {
      return {false, it, 0.0};
    }
    st.H = sys.H_new;

    if (!std::isfinite(sys.field_res)) return {false, it, 0.0};
    const bool constraint_ok =
        !bordered ||
        std::abs(sys.dG - dtau) <= std::max(kArcTolRel * dtau, kArcTolAbs);
    if (sys.field_res < cfg.tol && constraint_ok) {
      return {true, it, reaction_load(model.dofs, sys.f_full)};
    }
    if (it >= cfg.max_iter) return {false, it, 0.0};

    lu.compute(sys.A);
    if (lu.info() != Eigen::Success) return {false, it, 0.0};
    const Eigen::VectorXd d = lu.solve(sys.rhs);
    if (!d.allFinite()) return {false, it, 0.0};

    if (bordered) {
      model.dofs.expand_add(beta * d.head(model.dofs.n_free),
                            beta * d[model.dofs.n_free], st.x);
      st.lambda += beta * d[model.dofs.n_free];
    } else {
      model.dofs.expand_add(beta * d, 0.0, st.x);
    }
  }
}

}  // namespace

StepResult newton_displacement_step(Model& model, const SolveSettings& cfg,
                                    double beta) {
  const IterationOutcome out = newton_loop(model, cfg, beta, false, 0.0);
  return {out.converged, out.iterations, out.load};
}

StepResult arc_length_step(Model& model, const SolveSettings& cfg, double beta,
                           double dtau) {
  const IterationOutcome out = newton_loop(model, cfg, beta, true, dtau);
  return {out.converged, out.iterations, out.load};
}

//-----------------------------------------------------------------------
//   run controller
//-----------------------------------------------------------------------

RunResult run_simulation(Model& model, const SolveSettings& cfg,
                         const AmrPolicy& amr, const StepObserver& observer) {
  RunResult rr;
  SimState& st = model.state;
  if (st.x.size() != model.dofs.n_total) {
    throw std::logic_error("run: model state not initialized");
  }

  StepMode mode = StepMode::displacement;
  double dlam = cfg.stepsize;
  double dtau = 0.0;
  double beta = 1.0;
  int fail = 0;
  const double switch_energy = cfg.effective_switch_energy();
  const bool relax = cfg.kind == SolverKind::monolithic;
  const bool monolithic = cfg.kind != SolverKind::staggered;

  auto abort_run = [&](const std::string& why) {
    rr.aborted = true;
    rr.abort_reason = why;
  };

  int step = 0;
  long attempts = 0;
  const long attempt_budget = 200L * cfg.max_steps + 1000L;

  while (step < cfg.max_steps && !rr.aborted) {
    if (++attempts > attempt_budget) {
      abort_run("attempt budget exhausted");
      break;
    }

    const Model snapshot = model;
    if (mode == StepMode::displacement) st.lambda = st.lambda_n + dlam;
    model.dofs.apply(st.x, st.lambda);

    StepResult res;
    if (cfg.kind == SolverKind::staggered) {
      res = staggered_step(model, cfg);
    } else if (mode == StepMode::displacement) {
      res = newton_displacement_step(model, cfg, beta);
    } else {
      res = arc_length_step(model, cfg, beta, dtau);
    }

    if (res.converged && amr.enabled) {
      auto resolve = [&](Model& m) -> bool {
        StepResult r;
        if (cfg.kind == SolverKind::staggered) {
          r = staggered_step(m, cfg);
        } else if (mode == StepMode::displacement) {
          r = newton_displacement_step(m, cfg, beta);
        } else {
          r = arc_length_step(m, cfg, beta, dtau);
        }
        if (r.converged) {
          // Keep the step's peak Newton effort for the dtau adaptation; the
          // reaction must come from the final mesh.
          res.iterations = std::max(res.iterations, r.iterations);
          res.load = r.load;
        }
        return r.converged;
      };
      const AmrOutcome am = amr_cycle(model, amr, resolve);
      if (am.resolve_failed) res.converged = false;
    }

    if (!res.converged) {
      model = snapshot;
      if (mode == StepMode::displacement) {
        dlam /= 10.0;
        if (dlam < cfg.dlambda_floor) abort_run("load increment underflow");
      } else {
        ++fail;
        if (fail > 2) {
          dtau *= 0.5;
          if (relax) beta /= cfg.beta_cut;
        }
        if (relax) beta /= cfg.beta_cut;
        if (relax && beta < cfg.beta_floor) {
          abort_run("under-relaxation underflow");
        } else if (dtau < cfg.dtau_floor) {
          abort_run("dissipation increment underflow");
        }
      }
      continue;
    }

    fail = 0;
    const double dG = incremental_dissipation(model.mesh, model.mat, st.x, st.x_n);
    const double load = res.load;

    // Clamp the phase field, then restore hanging-node consistency.
    st.x.tail(model.dofs.n_nodes) =
        st.x.tail(model.dofs.n_nodes).cwiseMax(0.0).cwiseMin(1.0);
    model.dofs.apply(st.x, st.lambda);

    for (int e : model.mesh.active_elems()) {
      for (int qp = 0; qp < 4; ++qp) {
        if (st.H[e][qp] < st.H_n[e][qp]) rr.history_monotone = false;
      }
    }
    const auto phi = st.x.tail(model.dofs.n_nodes);
    if (!(phi.minCoeff() >= 0.0 && phi.maxCoeff() <= 1.0)) rr.phi_in_bounds = false;

    st.commit();
    ++step;

    StepRecord rec;
    rec.step = step;
    rec.lambda = st.lambda;
    rec.load = load;
    rec.dG = dG;
    rec.iterations = res.iterations;
    rec.beta = beta;
    rec.dtau = mode == StepMode::arclength ? dtau : 0.0;
    rec.mode = mode;
    rec.ndof = model.dofs.n_free;
    rr.history.push_back(rec);
    if (observer) observer(model, rec);

    if (relax) beta = std::min(1.0, beta * cfg.beta_grow);

    if (monolithic) {
      if (mode == StepMode::displacement && dG >= switch_energy) {
        mode = StepMode::arclength;
        dlam = 0.0;
        dtau = switch_energy;
      } else if (mode == StepMode::arclength) {
        if (res.iterations < cfg.optiter) {
          dtau = std::min(dtau * cfg.dtau_grow, cfg.dtau_max);
        } else {
          dtau = std::min(
              dtau * std::pow(cfg.dtau_shrink_base,
                              cfg.dtau_shrink_exp * (res.iterations - cfg.optiter)),
              cfg.dtau_max);
        }
      }
    }

    if (st.lambda >= cfg.lambda_max) break;
    if (cfg.g_final < 1e29 &&
        fracture_energy(model.mesh, model.mat, st.x) >= cfg.g_final) {
      break;
    }
  }
  return rr;
}

}  // namespace pff
