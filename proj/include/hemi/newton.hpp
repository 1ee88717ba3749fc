#pragma once

#include <functional>

#include <Eigen/Core>

namespace hemi {

struct NewtonConfig {
  double tol = 1e-11;    // on the Euclidean residual norm
  int max_iters = 50;
  double damping = 0.5;  // backtracking factor
  int max_backtracks = 30;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/**
 * Semismooth Newton iteration for a piecewise smooth residual, using the
 * generalized Jacobian of the active branch at each iterate. Steps are
 * backtracked on the residual norm; if no backtracked step decreases it the
 * full step is taken, as in an active-set iteration.
 */
NewtonResult semismooth_newton(const ResidualFn& residual, const JacobianFn& jacobian, Eigen::VectorXd x0,
                               const NewtonConfig& config);

}  // namespace hemi
