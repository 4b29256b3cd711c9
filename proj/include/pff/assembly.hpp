/**
 * @file assembly.hpp
 * @brief Element systems and global assembly of the coupled problem.
 *
 * The monolithic unknown block is [u; phi]; in arc-length mode the system
 * is bordered by one extra column (response to the load factor) and one
 * extra row (linearized dissipation constraint), giving
 *
 *   [ K_uu  K_up  K_uu*uhat ] [du     ]   [ f_u          ]
 *   [ K_pu  K_pp  K_pu*uhat ] [dphi   ] = [ f_p          ]
 *   [ 0     L_p   0         ] [dlambda]  -[ dG - dtau    ]
 *
 * condensed onto free dofs through the constraint map.
 */

#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pff/constraints.hpp"
#include "pff/material.hpp"
#include "pff/mesh.hpp"

namespace pff {

struct AssemblyError : std::runtime_error {
  int elem;
  AssemblyError(int e, const std::string& what)
      : std::runtime_error("element " + std::to_string(e) + ": " + what),
        elem(e) {}
};

struct ElementSystem {
  Eigen::Matrix<double, 8, 8> Kuu;
  Eigen::Matrix<double, 8, 4> Kup;
  Eigen::Matrix<double, 4, 8> Kpu;
  Eigen::Matrix4d Kpp;
  Eigen::Matrix<double, 8, 1> fu;
  Eigen::Vector4d fp;
  Eigen::Vector4d arc_row;  // d(dG)/dphi
  double dG = 0.0;          // element share of the incremental dissipation
};

// History update at the four Gauss points: H = max(H at step start, psi_f
// of the current strain).
std::array<double, 4> element_history(const HierMesh& mesh, int e,
                                      const MaterialParams& mat,
                                      const Eigen::Matrix<double, 8, 1>& u_e,
                                      const std::array<double, 4>& h_start);

// Tangent blocks and internal forces of one element. H must already hold
// the values for the current iterate; the crack-driving coupling row K_pu
// is zeroed at Gauss points where the history is not actively loading.
// dphi_e is the phase increment since the last converged step.
ElementSystem element_system(const HierMesh& mesh, int e,
                             const MaterialParams& mat,
                             const Eigen::Matrix<double, 8, 1>& u_e,
                             const Eigen::Vector4d& phi_e,
                             const Eigen::Vector4d& dphi_e,
                             const std::array<double, 4>& h_e);

struct GlobalSystem {
  Eigen::SparseMatrix<double> A;  // n_free (+1 when bordered)
  Eigen::VectorXd rhs;            // negative condensed residual
  Eigen::VectorXd f_full;         // raw internal forces, all dofs
  double dG = 0.0;                // assembled incremental dissipation
  double field_res = 0.0;         // ||T^T f||_2
  bool bordered = false;
  std::vector<std::array<double, 4>> H_new;
};

// Assembles the condensed system at state x. x_start and H_start are the
// last converged fields (phase increment baseline and history floor).
// threads > 1 splits the element loop into contiguous chunks merged in
// order, so results are identical for a fixed thread count.
GlobalSystem assemble_global(const HierMesh& mesh, const DofMap& dofs,
                             const MaterialParams& mat,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& x_start,
                             const std::vector<std::array<double, 4>>& H_start,
                             bool bordered, double dtau, int threads = 1);

// Reaction conjugate to the load factor: internal forces contracted with
// the prescribed loading pattern (hanging-node shares included).
double reaction_load(const DofMap& dofs, const Eigen::VectorXd& f_full);

}  // namespace pff
