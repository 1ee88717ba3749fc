#include "hemi/contact_laws.hpp"

#include <cmath>

namespace hemi {

void ContactLaw::validate() const {
  for (double value : {q_max, p_const, h_tau}) {
    if (!std::isfinite(value) || value < 0.0) {
      throw InputError("contact law parameters must be finite and nonnegative");
    }
  }
}

double j_nu(double xi, const ContactLaw& law) {
  if (xi < 0.0) return 0.0;
  return 0.5 * law.p_const * xi * xi + law.q_max * xi;
}

SubgradientInterval d_j_nu(double xi, const ContactLaw& law) {
  if (xi < 0.0) return {0.0, 0.0};
  if (xi == 0.0) return {0.0, law.q_max};
  const double g = law.p_const * xi + law.q_max;
  return {g, g};
}

double p_response(double xi, const ContactLaw& law) { return xi > 0.0 ? law.p_const * xi : 0.0; }

double j_tau(const Eigen::Vector2d& xi) { return xi.norm(); }

SubgradientBall d_j_tau(const Eigen::Vector2d& xi) {
  const double norm = xi.norm();
  if (norm == 0.0) return {Eigen::Vector2d::Zero(), 1.0};
  return {xi / norm, 0.0};
}

double j_boundary(std::span<const TracePoint> trace, std::span<const double> weights,
                  const ContactLaw& law) {
  if (trace.size() != weights.size()) {
    throw InputError("trace and quadrature weights differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    total += weights[i] * (j_nu(trace[i].u_nu, law) + law.h_tau * std::abs(trace[i].u_tau));
  }
  return total;
}

NormalAugmented l_nu(double xi, double lambda, double eps, double q_max) {
  if (!(eps > 0.0)) throw InputError("penalty parameter must be positive");
  NormalAugmented out;
  const double s = lambda + eps * xi;
  if (s <= -q_max) {
    const double shifted = q_max + lambda;
    out.branch = NormalAugmented::Branch::Threshold;
    out.value = -q_max * xi - shifted * shifted / (2.0 * eps);
    out.d_xi = -q_max;
    out.d_lambda = -shifted / eps;
    out.h_lambda_lambda = -1.0 / eps;
  } else if (s <= 0.0) {
    out.branch = NormalAugmented::Branch::Contact;
    out.value = lambda * xi + 0.5 * eps * xi * xi;
    out.d_xi = s;
    out.d_lambda = xi;
    out.h_xi_xi = eps;
    out.h_xi_lambda = 1.0;
  } else {
    out.branch = NormalAugmented::Branch::Open;
    out.value = -lambda * lambda / (2.0 * eps);
    out.d_lambda = -lambda / eps;
    out.h_lambda_lambda = -1.0 / eps;
  }
  return out;
}

TangentialAugmented l_tau(const Eigen::Vector2d& u, const Eigen::Vector2d& lambda, double eps,
                          double h_tau) {
  if (!(eps > 0.0)) throw InputError("penalty parameter must be positive");
  TangentialAugmented out;
  const Eigen::Vector2d s = lambda + eps * u;
  const double norm_s = s.norm();
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  if (norm_s <= h_tau) {
    out.stick = true;
    out.value = lambda.dot(u) + 0.5 * eps * u.squaredNorm();
    out.d_u = s;
    out.d_lambda = u;
    out.h_uu = eps * I;
    out.h_ulambda = I;
    return out;
  }
  out.stick = false;
  const Eigen::Vector2d n = s / norm_s;
  const Eigen::Matrix2d projector = I - n * n.transpose();
  const double ratio = h_tau / norm_s;
  out.value = (2.0 * h_tau * norm_s - h_tau * h_tau - lambda.squaredNorm()) / (2.0 * eps);
  out.d_u = h_tau * n;
  out.d_lambda = (h_tau * n - lambda) / eps;
  out.h_uu = ratio * eps * projector;
  out.h_ulambda = ratio * projector;
  out.h_lambdalambda = (ratio * projector - I) / eps;
  return out;
}

}  // namespace hemi
