#pragma once

#include <optional>

#include <Eigen/Core>

#include "hemi/contact_laws.hpp"
#include "hemi/newton.hpp"
#include "hemi/result.hpp"
#include "hemi/schur.hpp"

namespace hemi {

struct ALConfig {
  double eps_init = 1.0;
  double eps_factor = 0.5;  // < 1 decreases the penalty each outer step
  double eps_min = 1e-4;
  double eps_max = 1e4;
  int outer_max = 20;
  double outer_tol = 1e-8;  // V-norm change between outer iterates
  double newton_tol = 1e-11;
  int newton_max = 50;
  double damping = 0.5;

  void validate() const;
};

/**
 * Multipliers per contact node in the layout (lambda_nu, lambda_tau). The
 * normal entry belongs to the separation coordinate xi = -u_nu, so at a
 * solution it equals minus the threshold part of the contact pressure; the
 * tangential entry equals the friction force -sigma_tau.
 */
using Multipliers = Eigen::VectorXd;

/**
 * Merit function 1/2 u'Ku - F'u + sum_i w_i [l_nu + l_tau + p_const max(u_nu, 0)^2 / 2]
 * on the full free-DOF displacement. Its gradient is al_residual.
 */
double al_merit(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                const Multipliers& lambda, double eps_nu, double eps_tau);

/// Stacked residual (displacement block of length num_dofs, multiplier block of length 2 n_C).
Eigen::VectorXd al_residual(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                            const Multipliers& lambda, double eps_nu, double eps_tau);

/// Residual and generalized Jacobian of the same system condensed onto z = (u_C, lambda).
Eigen::VectorXd al_reduced_residual(const ReducedSystem& reduced, const ContactLaw& law,
                                    const Eigen::VectorXd& z, double eps_nu, double eps_tau);
Eigen::MatrixXd al_reduced_jacobian(const ReducedSystem& reduced, const ContactLaw& law,
                                    const Eigen::VectorXd& z, double eps_nu, double eps_tau);

SolveResult solve_al(const ReducedSystem& reduced, const ContactLaw& law, const ALConfig& config,
                     const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

}  // namespace hemi
