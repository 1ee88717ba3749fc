#include "hemi/direct_opt.hpp"

#include <chrono>
#include <cmath>

namespace hemi {

namespace {

double node_energy(double ux, double uy, const ContactLaw& law) {
  return j_nu(-uy, law) + law.h_tau * std::abs(ux);
}

}  // namespace

ReducedObjective::ReducedObjective(const ReducedSystem& reduced, const ContactLaw& law)
    : reduced_(reduced), law_(law), weights_(reduced.system().weights()) {
  law_.validate();
}

double ReducedObjective::boundary_term(const Eigen::VectorXd& u_C) const {
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    total += weights_[i] * node_energy(u_C[2 * i], u_C[2 * i + 1], law_);
  }
  return total;
}

double ReducedObjective::value(const Eigen::VectorXd& u_C) const {
  if (u_C.size() != reduced_.size()) throw InputError("reduced displacement has the wrong length");
  ++evaluations_;
  return 0.5 * u_C.dot(reduced_.S() * u_C) - reduced_.g().dot(u_C) + boundary_term(u_C);
}

std::function<double(double)> ReducedObjective::along(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const {
  // f(x + t d) - f(x) = t r.d + t^2 d'Sd / 2 + sum_i w_i [j_i(x + t d) - j_i(x)], r = S x - g.
  const Eigen::VectorXd Sd = reduced_.S() * d;
  const double slope = (reduced_.S() * x - reduced_.g()).dot(d);
  const double curvature = d.dot(Sd);
  std::vector<int> touched;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (d[2 * i] != 0.0 || d[2 * i + 1] != 0.0) touched.push_back(static_cast<int>(i));
  }
  return [this, x, d, slope, curvature, touched = std::move(touched)](double t) {
    ++evaluations_;
    double delta = t * slope + 0.5 * t * t * curvature;
    for (int i : touched) {
      const double ux = x[2 * i], uy = x[2 * i + 1];
      delta += weights_[i] *
               (node_energy(ux + t * d[2 * i], uy + t * d[2 * i + 1], law_) - node_energy(ux, uy, law_));
    }
    return delta;
  };
}

SolveResult solve_direct(const ReducedSystem& reduced, const ContactLaw& law, const PowellConfig& config,
                         const std::optional<Eigen::VectorXd>& warm_start) {
  const auto started = std::chrono::steady_clock::now();
  const DiscreteSystem& system = reduced.system();
  ReducedObjective objective(reduced, law);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(reduced.size());
  if (warm_start) x0 = reduced.contact_part(*warm_start);

  const PowellResult found = powell_minimize(objective, x0, config);

  SolveResult result;
  result.method = Method::Opt;
  result.denominator = system.disc.denominator();
  result.u = reduced.recover_interior(found.x);
  result.contact = describe_contact(system, result.u);
  result.status = found.converged ? SolveStatus::Converged : SolveStatus::NotConverged;
  result.iterations = found.cycles;
  result.evaluations = objective.evaluations();
  result.objective = found.f + reduced.energy_offset();
  result.history = found.history;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace hemi
