/**
 * @file energy.hpp
 * @brief Quadrature of fracture and elastic energies over the active mesh.
 *
 * Standalone loops, kept separate from assembly so converged arc-length
 * steps can be checked against an independent evaluation of the
 * dissipation increment.
 */

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pff/material.hpp"
#include "pff/mesh.hpp"

namespace pff {

// G(phi) = int Gc/(cw l) (w(phi) + l^2 |grad phi|^2).
double fracture_energy(const HierMesh& mesh, const MaterialParams& mat,
                       const Eigen::VectorXd& x);

// Linearized dissipation increment between two states:
// int Gc/(cw l) (w'(phi) dphi + 2 l^2 grad phi . grad dphi).
double incremental_dissipation(const HierMesh& mesh, const MaterialParams& mat,
                               const Eigen::VectorXd& x,
                               const Eigen::VectorXd& x_start);

// Stored elastic energy int g(phi) psi(eps).
double elastic_energy(const HierMesh& mesh, const MaterialParams& mat,
                      const Eigen::VectorXd& x);

}  // namespace pff
