#pragma once

#include <span>

#include <Eigen/Core>

#include "hemi/mesh.hpp"

namespace hemi {

/**
 * Foundation law on the contact boundary.
 *
 * Normal: j_nu(xi) = 0 for xi < 0 and p_const xi^2 / 2 + q_max xi for xi >= 0,
 * so -sigma_nu in p(xi) + dq(xi). Tangential: h_tau ||xi||.
 */
struct ContactLaw {
  double q_max = 0.0;
  double p_const = 0.0;
  double h_tau = 0.0;

  void validate() const;
};

/// Closed interval [lo, hi].
struct SubgradientInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double g, double tol = 0.0) const { return g >= lo - tol && g <= hi + tol; }
  /// max over g in [lo, hi] of g * s.
  double support(double s) const { return s >= 0.0 ? hi * s : lo * s; }
};

/// Closed ball around `center` with `radius`.
struct SubgradientBall {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;

  bool contains(const Eigen::Vector2d& g, double tol = 0.0) const {
    return (g - center).norm() <= radius + tol;
  }
  double support(const Eigen::Vector2d& s) const { return center.dot(s) + radius * s.norm(); }
};

double j_nu(double xi, const ContactLaw& law);
SubgradientInterval d_j_nu(double xi, const ContactLaw& law);
/// Smooth part p(xi) = p_const max(xi, 0) of the normal subdifferential.
double p_response(double xi, const ContactLaw& law);

double j_tau(const Eigen::Vector2d& xi);
SubgradientBall d_j_tau(const Eigen::Vector2d& xi);

/// Lumped quadrature sum_i w_i [j_nu(u_nu,i) + h_tau j_tau(u_tau,i)].
double j_boundary(std::span<const TracePoint> trace, std::span<const double> weights,
                  const ContactLaw& law);

/**
 * Augmented Lagrangian of the normal threshold term, as a function of the
 * separation coordinate xi (positive when the gap opens) and multiplier
 * lambda. Branches are keyed on s = lambda + eps xi:
 *
 *   s <= -q_max        : -q_max xi - (q_max + lambda)^2 / (2 eps)
 *   -q_max < s <= 0    : lambda xi + eps xi^2 / 2
 *   s > 0              : -lambda^2 / (2 eps)
 *
 * This is inf_v { q_max max(-v, 0) + lambda (xi - v) + eps (xi - v)^2 / 2 },
 * which is C^1 in (xi, lambda). At a saddle point lambda lies in the
 * subdifferential of q_max max(-xi, 0).
 */
struct NormalAugmented {
  enum class Branch { Threshold, Contact, Open };

  double value = 0.0;
  double d_xi = 0.0;
  double d_lambda = 0.0;
  // Generalized Hessian of the active branch.
  double h_xi_xi = 0.0;
  double h_xi_lambda = 0.0;
  double h_lambda_lambda = 0.0;
  Branch branch = Branch::Open;
};

NormalAugmented l_nu(double xi, double lambda, double eps, double q_max);

/**
 * Augmented Lagrangian of the friction term h_tau ||u||:
 *
 *   ||s|| <= h_tau : lambda . u + eps ||u||^2 / 2                (stick)
 *   otherwise      : (2 h_tau ||s|| - h_tau^2 - ||lambda||^2) / (2 eps)   (slip)
 *
 * with s = lambda + eps u.
 */
struct TangentialAugmented {
  double value = 0.0;
  Eigen::Vector2d d_u = Eigen::Vector2d::Zero();
  Eigen::Vector2d d_lambda = Eigen::Vector2d::Zero();
  Eigen::Matrix2d h_uu = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d h_ulambda = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d h_lambdalambda = Eigen::Matrix2d::Zero();
  bool stick = true;
};

TangentialAugmented l_tau(const Eigen::Vector2d& u, const Eigen::Vector2d& lambda, double eps,
                          double h_tau);

}  // namespace hemi
