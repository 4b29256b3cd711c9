/**
 * @file state.hpp
 * @brief Solution state: fields, load factor, history, last converged copy.
 */

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace pff {

// Full-vector layout: u dofs interleaved per node, then one phase dof per
// node (see DofMap). History lives at the 2x2 Gauss points of every element
// ever created; only active-element entries are meaningful.
struct SimState {
  Eigen::VectorXd x;
  double lambda = 0.0;
  std::vector<std::array<double, 4>> H;

  // Last converged step (rollback target and increment baseline).
  Eigen::VectorXd x_n;
  double lambda_n = 0.0;
  std::vector<std::array<double, 4>> H_n;

  void init(int n_total, std::size_t n_elems) {
    x = Eigen::VectorXd::Zero(n_total);
    lambda = 0.0;
    H.assign(n_elems, {0.0, 0.0, 0.0, 0.0});
    commit();
  }

  void commit() {
    x_n = x;
    lambda_n = lambda;
    H_n = H;
  }

  void rollback() {
    x = x_n;
    lambda = lambda_n;
    H = H_n;
  }
};

}  // namespace pff
