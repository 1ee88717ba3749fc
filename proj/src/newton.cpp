#include "hemi/newton.hpp"

#include <cmath>
#include <deque>

#include <Eigen/LU>

namespace hemi {

NewtonResult semismooth_newton(const ResidualFn& residual, const JacobianFn& jacobian, Eigen::VectorXd x0,
                               const NewtonConfig& config) {
  NewtonResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = residual(out.x);
  out.residual_norm = r.norm();
  std::deque<double> recent{out.residual_norm};

  while (out.residual_norm > config.tol && out.iterations < config.max_iters) {
    Eigen::MatrixXd J = jacobian(out.x);
    Eigen::VectorXd step = J.partialPivLu().solve(-r);
    if (!step.allFinite()) {
      J.diagonal().array() += 1e-12;
      step = J.partialPivLu().solve(-r);
    }
    ++out.iterations;

    double t = 1.0;
    Eigen::VectorXd trial = out.x + step;
    Eigen::VectorXd r_trial = residual(trial);
    for (int k = 0; k < config.max_backtracks && r_trial.norm() > (1.0 - 1e-4 * t) * out.residual_norm; ++k) {
      t *= config.damping;
      Eigen::VectorXd candidate = out.x + t * step;
      Eigen::VectorXd r_candidate = residual(candidate);
      if (r_candidate.norm() <= (1.0 - 1e-4 * t) * out.residual_norm) {
        trial = std::move(candidate);
        r_trial = std::move(r_candidate);
        break;
      }
      if (k + 1 == config.max_backtracks) {
        // Nothing decreased: keep the full step.
        trial = out.x + step;
        r_trial = residual(trial);
      }
    }
    out.x = std::move(trial);
    r = std::move(r_trial);
    out.residual_norm = r.norm();
    if (!std::isfinite(out.residual_norm)) {
      out.diverged = true;
      return out;
    }

    recent.push_back(out.residual_norm);
    if (recent.size() > 6) recent.pop_front();
    if (recent.size() == 6 && recent.back() > 10.0 * recent.front()) {
      out.diverged = true;
      return out;
    }
  }
  out.converged = out.residual_norm <= config.tol;
  return out;
}

}  // namespace hemi
