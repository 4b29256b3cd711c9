/**
 * @file shape.cpp
 * @brief Bilinear quad shape functions and 2x2 Gauss quadrature.
 */

#include "pff/shape.hpp"

#include <cmath>

namespace pff {

namespace {
const double kGaussAbscissa = 1.0 / std::sqrt(3.0);
}

Eigen::Vector2d gauss_point(int qp) {
  return {kGaussAbscissa * kXiCorner[qp], kGaussAbscissa * kEtaCorner[qp]};
}

double gauss_weight(int) { return 1.0; }

Eigen::Vector4d shape_values(const Eigen::Vector2d& xi) {
  Eigen::Vector4d n;
  for (int k = 0; k < 4; ++k) {
    n[k] = 0.25 * (1.0 + xi[0] * kXiCorner[k]) * (1.0 + xi[1] * kEtaCorner[k]);
  }
  return n;
}

Eigen::Matrix<double, 4, 2> shape_gradients(const Eigen::Vector2d& xi) {
  Eigen::Matrix<double, 4, 2> g;
  for (int k = 0; k < 4; ++k) {
    g(k, 0) = 0.25 * kXiCorner[k] * (1.0 + xi[1] * kEtaCorner[k]);
    g(k, 1) = 0.25 * kEtaCorner[k] * (1.0 + xi[0] * kXiCorner[k]);
  }
  return g;
}

QuadGeometry quad_geometry(const Eigen::Matrix<double, 4, 2>& coords,
                           const Eigen::Vector2d& xi) {
  const Eigen::Matrix<double, 4, 2> gref = shape_gradients(xi);
  const Eigen::Matrix2d jac = coords.transpose() * gref;  // dx/dxi
  QuadGeometry out;
  out.detJ = jac.determinant();
  out.grad_x = gref * jac.inverse();
  return out;
}

}  // namespace pff
