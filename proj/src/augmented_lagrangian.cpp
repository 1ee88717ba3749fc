#include "hemi/augmented_lagrangian.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hemi {

namespace {

// Per-node contact contribution to the merit, its gradient, and its Hessian,
// in the local ordering (u_x, u_y, lambda_nu, lambda_tau).
struct NodeTerms {
  double value = 0.0;
  Eigen::Vector4d grad = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
};

NodeTerms node_terms(double ux, double uy, double lambda_nu, double lambda_tau, double eps_nu, double eps_tau,
                     const ContactLaw& law) {
  NodeTerms out;
  // Separation coordinate xi = -u_nu = u_y.
  const NormalAugmented normal = l_nu(uy, lambda_nu, eps_nu, law.q_max);
  const TangentialAugmented tangential =
      l_tau(Eigen::Vector2d{ux, 0.0}, Eigen::Vector2d{lambda_tau, 0.0}, eps_tau, law.h_tau);
  const double penetration = std::max(-uy, 0.0);

  out.value = normal.value + tangential.value + 0.5 * law.p_const * penetration * penetration;
  out.grad << tangential.d_u.x(), normal.d_xi - law.p_const * penetration, normal.d_lambda,
      tangential.d_lambda.x();

  out.hess(0, 0) = tangential.h_uu(0, 0);
  out.hess(0, 3) = out.hess(3, 0) = tangential.h_ulambda(0, 0);
  out.hess(3, 3) = tangential.h_lambdalambda(0, 0);
  out.hess(1, 1) = normal.h_xi_xi + (uy < 0.0 ? law.p_const : 0.0);
  out.hess(1, 2) = out.hess(2, 1) = normal.h_xi_lambda;
  out.hess(2, 2) = normal.h_lambda_lambda;
  return out;
}

void check_sizes(const DiscreteSystem& system, const Eigen::VectorXd& u, const Multipliers& lambda) {
  if (u.size() != system.dofs().num_dofs() || lambda.size() != 2 * system.num_contact_nodes()) {
    throw InputError("displacement or multiplier vector has the wrong length");
  }
}

}  // namespace

void ALConfig::validate() const {
  if (!(eps_init > 0.0) || !(eps_factor > 0.0) || !(eps_min > 0.0) || !(eps_max >= eps_min) ||
      outer_max <= 0 || !(newton_tol > 0.0) || newton_max <= 0 || !(damping > 0.0 && damping < 1.0) ||
      !(outer_tol > 0.0)) {
    throw InputError("invalid augmented Lagrangian configuration");
  }
}

double al_merit(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                const Multipliers& lambda, double eps_nu, double eps_tau) {
  check_sizes(system, u, lambda);
  double total = 0.5 * u.dot(system.K * u) - system.F.dot(u);
  const auto& dofs = system.dofs();
  for (int i = 0; i < system.num_contact_nodes(); ++i) {
    const int dof = dofs.contact_dofs[2 * i];
    total += system.weights()[i] *
             node_terms(u[dof], u[dof + 1], lambda[2 * i], lambda[2 * i + 1], eps_nu, eps_tau, law).value;
  }
  return total;
}

Eigen::VectorXd al_residual(const DiscreteSystem& system, const ContactLaw& law, const Eigen::VectorXd& u,
                            const Multipliers& lambda, double eps_nu, double eps_tau) {
  check_sizes(system, u, lambda);
  const int n = system.dofs().num_dofs();
  Eigen::VectorXd r(n + lambda.size());
  r.head(n) = system.K * u - system.F;
  r.tail(lambda.size()).setZero();
  const auto& dofs = system.dofs();
  for (int i = 0; i < system.num_contact_nodes(); ++i) {
    const int dof = dofs.contact_dofs[2 * i];
    const double w = system.weights()[i];
    const NodeTerms t = node_terms(u[dof], u[dof + 1], lambda[2 * i], lambda[2 * i + 1], eps_nu, eps_tau, law);
    r[dof] += w * t.grad[0];
    r[dof + 1] += w * t.grad[1];
    r[n + 2 * i] = w * t.grad[2];
    r[n + 2 * i + 1] = w * t.grad[3];
  }
  return r;
}

Eigen::VectorXd al_reduced_residual(const ReducedSystem& reduced, const ContactLaw& law,
                                    const Eigen::VectorXd& z, double eps_nu, double eps_tau) {
  const int m = reduced.size();
  if (z.size() != 2 * m) throw InputError("reduced AL vector has the wrong length");
  const auto& weights = reduced.system().weights();
  Eigen::VectorXd r(2 * m);
  r.head(m) = reduced.S() * z.head(m) - reduced.g();
  for (int i = 0; i < m / 2; ++i) {
    const NodeTerms t = node_terms(z[2 * i], z[2 * i + 1], z[m + 2 * i], z[m + 2 * i + 1], eps_nu, eps_tau, law);
    r[2 * i] += weights[i] * t.grad[0];
    r[2 * i + 1] += weights[i] * t.grad[1];
    r[m + 2 * i] = weights[i] * t.grad[2];
    r[m + 2 * i + 1] = weights[i] * t.grad[3];
  }
  return r;
}

Eigen::MatrixXd al_reduced_jacobian(const ReducedSystem& reduced, const ContactLaw& law,
                                    const Eigen::VectorXd& z, double eps_nu, double eps_tau) {
  const int m = reduced.size();
  if (z.size() != 2 * m) throw InputError("reduced AL vector has the wrong length");
  const auto& weights = reduced.system().weights();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  J.topLeftCorner(m, m) = reduced.S();
  for (int i = 0; i < m / 2; ++i) {
    const NodeTerms t = node_terms(z[2 * i], z[2 * i + 1], z[m + 2 * i], z[m + 2 * i + 1], eps_nu, eps_tau, law);
    const int index[4] = {2 * i, 2 * i + 1, m + 2 * i, m + 2 * i + 1};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) J(index[a], index[b]) += weights[i] * t.hess(a, b);
    }
  }
  return J;
}

SolveResult solve_al(const ReducedSystem& reduced, const ContactLaw& law, const ALConfig& config,
                     const std::optional<Eigen::VectorXd>& warm_start) {
  const auto started = std::chrono::steady_clock::now();
  law.validate();
  config.validate();
  const DiscreteSystem& system = reduced.system();
  const int m = reduced.size();

  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * m);
  if (warm_start) z.head(m) = reduced.contact_part(*warm_start);

  SolveResult result;
  result.method = Method::AL;
  result.denominator = system.disc.denominator();
  result.status = SolveStatus::NotConverged;

  NewtonConfig newton{config.newton_tol, config.newton_max, config.damping};
  Eigen::VectorXd u_prev;
  double eps = config.eps_init;
  for (int outer = 0; outer < config.outer_max; ++outer) {
    eps = std::clamp(eps, config.eps_min, config.eps_max);
    const NewtonResult step = semismooth_newton(
        [&](const Eigen::VectorXd& x) { return al_reduced_residual(reduced, law, x, eps, eps); },
        [&](const Eigen::VectorXd& x) { return al_reduced_jacobian(reduced, law, x, eps, eps); }, z, newton);
    z = step.x;
    result.iterations += step.iterations;
    result.history.push_back(step.residual_norm);
    if (!step.converged) {
      result.status = step.diverged ? SolveStatus::Diverged : SolveStatus::NotConverged;
      break;
    }
    Eigen::VectorXd u = reduced.recover_interior(z.head(m));
    const bool settled = u_prev.size() == u.size() && v_norm(system.M_V, u - u_prev) < config.outer_tol;
    u_prev = std::move(u);
    if (settled) {
      result.status = SolveStatus::Converged;
      break;
    }
    eps *= config.eps_factor;
  }

  result.u = reduced.recover_interior(z.head(m));
  result.contact = describe_contact(system, result.u);
  result.multipliers.resize(m);
  for (int i = 0; i < m / 2; ++i) {
    const double penetration = std::max(-z[2 * i + 1], 0.0);
    result.multipliers[2 * i] = law.p_const * penetration - z[m + 2 * i];
    result.multipliers[2 * i + 1] = z[m + 2 * i + 1];
  }
  result.objective = al_merit(system, law, result.u, z.tail(m), eps, eps);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace hemi
