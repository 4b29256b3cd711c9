/**
 * @file material.hpp
 * @brief Isotropic elasticity, degradation functions and crack-driving
 *        energy splits for the hybrid phase-field formulation.
 *
 * Plane strain throughout. Strain and stress use engineering Voigt order
 * [xx, yy, xy] with the shear strain entry gamma = 2 eps_xy, so
 * sigma . eps_voigt reproduces the tensor contraction.
 */

#pragma once

#include <array>

#include <Eigen/Dense>

namespace pff {

enum class Degradation { quadratic, cubic, rational };
enum class Split { none, spectral, rankine };

struct MaterialParams {
  double lambda = 0.0;  // MPa
  double mu = 1.0;      // MPa
  double gc = 1.0;      // N/mm
  double ell = 0.1;     // mm
  double cw = 2.0;      // dissipation normalization

  Degradation degradation = Degradation::quadratic;
  double cubic_s = 1.0;         // cubic shape parameter, in (0, 1]
  double rat_p = 2.0;           // rational exponent, >= 2
  double rat_a1 = 1.0;
  double rat_a2 = 1.0;
  double rat_a3 = 1.0;

  Split split = Split::none;

  double youngs() const { return mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu); }
};

struct DegradationValue {
  double g = 0.0;
  double dg = 0.0;
  double ddg = 0.0;
};

// g(phi) with derivatives; evaluated literally (no clamping) so assembled
// tangents stay consistent with finite differences of the residual.
DegradationValue degradation(const MaterialParams& mat, double phi);

struct DissipationValue {
  double w = 0.0;
  double dw = 0.0;
  double ddw = 0.0;
};

// Quadratic local dissipation w(phi) = phi^2.
DissipationValue dissipation(double phi);

struct SplitValue {
  double psi_total = 0.0;  // full elastic energy density
  double psi_f = 0.0;      // crack-driving part
  double psi_r = 0.0;      // residual part
  Eigen::Vector3d sigma = Eigen::Vector3d::Zero();   // undegraded stress
  Eigen::Vector3d dpsi_f = Eigen::Vector3d::Zero();  // d psi_f / d eps
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();       // tangent of psi_total
};

// Splits the elastic energy at a strain state. The momentum equation always
// degrades the full energy (hybrid scheme); psi_f only feeds the history
// variable, so no second derivative of the split is needed.
SplitValue split_energy(const MaterialParams& mat, const Eigen::Vector3d& eps);

// Irreversibility: the history variable never decreases.
inline double update_history(double h_old, double psi_f) {
  return psi_f > h_old ? psi_f : h_old;
}

}  // namespace pff
