/**
 * @file constraints.hpp
 * @brief Dof classification, Dirichlet data and hanging-node constraints.
 *
 * Global dof layout: node n carries u dofs (2n, 2n+1) and phase dof
 * 2*n_nodes + n. Hanging dofs interpolate the two endpoints of the coarse
 * edge they sit on, with the loading pattern folded through the weights so
 * the condensed system only sees free dofs and the load factor.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pff/mesh.hpp"

namespace pff {

enum class DofClass : unsigned char { free_dof, fixed, driven, hanging };

// Nodal Dirichlet condition on a tagged node set. comp 0/1 selects a
// displacement component, comp 2 the phase field (fixed only). A driven
// condition scales its value with the load factor.
struct DirichletSpec {
  std::string tag;
  int comp = 0;
  bool driven = false;
  double value = 0.0;
};

struct MasterTerm {
  int col = 0;  // free-dof column
  double w = 0.0;
};

class DofMap {
 public:
  int n_nodes = 0;
  int n_total = 0;  // 3 * n_nodes
  int n_free = 0;

  std::vector<DofClass> cls;
  std::vector<int> free_index;               // dof -> free column, -1 otherwise
  std::vector<int> free_dofs;                // free column -> dof
  std::vector<std::vector<MasterTerm>> row_terms;  // free-master expansion
  std::vector<double> uhat_eff;              // d(x[dof]) / d(load factor)
  std::vector<double> fixed_eff;             // constant part of prescribed dofs

  static int udof(int node, int comp) { return 2 * node + comp; }
  int pdof(int node) const { return 2 * n_nodes + node; }

  // Writes prescribed and hanging entries of the full vector for the given
  // load factor; free entries are left untouched.
  void apply(Eigen::VectorXd& x, double lambda) const;

  // x += T d + uhat_eff * dlambda, covering free, hanging and driven dofs.
  void expand_add(const Eigen::VectorXd& d_free, double dlambda,
                  Eigen::VectorXd& x) const;

  // T^T r: accumulates full-space values onto free columns.
  Eigen::VectorXd condense(const Eigen::VectorXd& full) const;
};

// Classifies every dof of the mesh. Hanging nodes are midpoints of split
// edges that an active element still owns whole; their masters are the edge
// endpoints with weight 1/2 each and are guaranteed unconstrained by the
// 2:1 balance. Conflicting Dirichlet data and driven phase dofs are
// configuration errors.
DofMap build_constraints(const HierMesh& mesh,
                         const std::vector<DirichletSpec>& bcs);

}  // namespace pff
