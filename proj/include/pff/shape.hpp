/**
 * @file shape.hpp
 * @brief Bilinear quad shape functions and 2x2 Gauss quadrature.
 */

#pragma once

#include <array>

#include <Eigen/Dense>

namespace pff {

// Reference square [-1,1]^2, corners counter-clockwise from (-1,-1).
constexpr std::array<double, 4> kXiCorner = {-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kEtaCorner = {-1.0, -1.0, 1.0, 1.0};

// Gauss point k sits in the quadrant of corner k, so child/parent
// quadrant bookkeeping lines up with the corner ordering.
constexpr int kQuadPoints = 4;
Eigen::Vector2d gauss_point(int qp);
double gauss_weight(int qp);

// Shape values N_k(xi,eta), k following the corner order.
Eigen::Vector4d shape_values(const Eigen::Vector2d& xi);

// Reference-coordinate gradients dN_k/d(xi,eta), one row per node.
Eigen::Matrix<double, 4, 2> shape_gradients(const Eigen::Vector2d& xi);

struct QuadGeometry {
  Eigen::Matrix<double, 4, 2> grad_x;  // dN_k/d(x,y)
  double detJ = 0.0;
};

// Maps reference gradients through the element Jacobian. coords holds one
// corner per row. detJ <= 0 marks a degenerate (tangled) element.
QuadGeometry quad_geometry(const Eigen::Matrix<double, 4, 2>& coords,
                           const Eigen::Vector2d& xi);

}  // namespace pff
