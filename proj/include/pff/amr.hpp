/**
 * @file amr.hpp
 * @brief Phase-field driven adaptive refinement between load steps.
 */

#pragma once

#include <functional>
#include <vector>

#include "pff/model.hpp"

namespace pff {

struct AmrPolicy {
  bool enabled = true;
  double phi_threshold = 0.2;
  int max_depth = 4;
  bool resolve_after_refine = true;
  int max_cycles = 20;  // safety bound; marking normally exhausts itself
};

// Active elements below max_depth whose largest corner phase value exceeds
// the threshold.
std::vector<int> mark_elements(const HierMesh& mesh, const Eigen::VectorXd& x,
                               double phi_threshold, int max_depth);

struct AmrOutcome {
  int cycles = 0;           // refinement rounds applied
  bool resolve_failed = false;
};

// Runs mark -> refine -> rebuild constraints -> transfer until no element
// is marked. After each refinement the resolve callback re-converges the
// current step on the new mesh (same load factor / dissipation target);
// a false return stops the cycle and flags failure so the step controller
// can treat the whole step as failed.
AmrOutcome amr_cycle(Model& model, const AmrPolicy& policy,
                     const std::function<bool(Model&)>& resolve);

}  // namespace pff
