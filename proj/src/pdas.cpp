#include "hemi/pdas.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Cholesky>

namespace hemi {

namespace {

std::vector<TracePoint> reduced_trace(const Eigen::VectorXd& u_C) {
  std::vector<TracePoint> trace(u_C.size() / 2);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    trace[i].u_tau = u_C[2 * i];
    trace[i].u_nu = -u_C[2 * i + 1];
  }
  return trace;
}

double interval_distance(double g, double lo, double hi) { return std::max({lo - g, g - hi, 0.0}); }

// Weighted distance of the tractions from the boundary law at the displacement.
double law_violation(const std::vector<TracePoint>& trace, const std::vector<NodalTraction>& traction,
                     const std::vector<double>& weights, const ContactLaw& law, double tol) {
  double total = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double xi = std::abs(trace[i].u_nu) <= tol ? 0.0 : trace[i].u_nu;
    const SubgradientInterval normal = d_j_nu(xi, law);
    const double ut = std::abs(trace[i].u_tau) <= tol ? 0.0 : trace[i].u_tau;
    const double friction = -traction[i].sigma_tau;
    const double lo = ut > 0.0 ? law.h_tau : -law.h_tau;
    const double hi = ut < 0.0 ? -law.h_tau : law.h_tau;
    total += weights[i] * (interval_distance(-traction[i].sigma_nu, normal.lo, normal.hi) +
                           interval_distance(friction, lo, hi));
  }
  return total;
}

}  // namespace

ActiveSets ActiveSets::initial(int num_nodes) {
  ActiveSets sets;
  sets.normal.assign(num_nodes, NormalState::N1);
  sets.tangential.assign(num_nodes, TangentialState::T1);
  sets.slip_direction.assign(num_nodes, 1.0);
  return sets;
}

void PdasConfig::validate() const {
  if (!(eps_stab > 0.0) || max_outer <= 0 || cycle_history < 2) {
    throw InputError("invalid primal-dual active set configuration");
  }
}

Subproblem solve_subproblem(const ReducedSystem& reduced, const ContactLaw& law, const ActiveSets& sets) {
  const int m = reduced.size();
  if (sets.size() * 2 != m) throw InputError("active sets do not match the contact nodes");
  const auto& weights = reduced.system().weights();

  Eigen::MatrixXd A = reduced.S();
  Eigen::VectorXd b = reduced.g();
  std::vector<char> clamped(m, 0);
  for (int i = 0; i < sets.size(); ++i) {
    const int x = 2 * i, y = 2 * i + 1;
    const double w = weights[i];
    switch (sets.normal[i]) {
      case NormalState::N1: break;
      case NormalState::N2: clamped[y] = 1; break;
      case NormalState::N3:
        // Force w (p u_nu + q) pushes along +y; u_nu = -u_y.
        A(y, y) += w * law.p_const;
        b[y] += w * law.q_max;
        break;
    }
    if (sets.tangential[i] == TangentialState::T1) {
      clamped[x] = 1;
    } else {
      b[x] -= w * law.h_tau * sets.slip_direction[i];
    }
  }

  std::vector<int> free;
  for (int k = 0; k < m; ++k) {
    if (!clamped[k]) free.push_back(k);
  }
  Eigen::VectorXd u_C = Eigen::VectorXd::Zero(m);
  if (!free.empty()) {
    const int nf = static_cast<int>(free.size());
    Eigen::MatrixXd A_ff(nf, nf);
    Eigen::VectorXd b_f(nf);
    for (int r = 0; r < nf; ++r) {
      b_f[r] = b[free[r]];
      for (int c = 0; c < nf; ++c) A_ff(r, c) = A(free[r], free[c]);
    }
    const Eigen::VectorXd u_f = A_ff.llt().solve(b_f);
    for (int r = 0; r < nf; ++r) u_C[free[r]] = u_f[r];
  }

  Subproblem out;
  out.u_C = u_C;
  const Eigen::VectorXd reaction = reduced.S() * u_C - reduced.g();
  out.traction.resize(sets.size());
  for (int i = 0; i < sets.size(); ++i) {
    out.traction[i].sigma_tau = reaction[2 * i] / weights[i];
    out.traction[i].sigma_nu = -reaction[2 * i + 1] / weights[i];
  }
  return out;
}

ActiveSets classify(const std::vector<TracePoint>& trace, const std::vector<NodalTraction>& traction,
                    const ActiveSets& previous, const ContactLaw& law, double eps_stab) {
  const int n = previous.size();
  if (static_cast<int>(trace.size()) != n || static_cast<int>(traction.size()) != n) {
    throw InputError("classification inputs are not aligned");
  }
  ActiveSets next = previous;
  for (int i = 0; i < n; ++i) {
    const double u_nu = trace[i].u_nu;
    const double pressure = -traction[i].sigma_nu;
    switch (previous.normal[i]) {
      case NormalState::N1:
        next.normal[i] = u_nu < -eps_stab ? NormalState::N1 : NormalState::N2;
        break;
      case NormalState::N2:
        next.normal[i] = pressure < -eps_stab                   ? NormalState::N1
                         : pressure < law.q_max + eps_stab ? NormalState::N2
                                                                 : NormalState::N3;
        break;
      case NormalState::N3:
        next.normal[i] = u_nu < -eps_stab ? NormalState::N2 : NormalState::N3;
        break;
    }

    if (previous.tangential[i] == TangentialState::T1) {
      const double friction = -traction[i].sigma_tau;
      if (std::abs(friction) >= law.h_tau + eps_stab) {
        next.tangential[i] = TangentialState::T2;
        next.slip_direction[i] = friction > 0.0 ? 1.0 : -1.0;
      }
    } else if (trace[i].u_tau * previous.slip_direction[i] < -eps_stab) {
      next.tangential[i] = TangentialState::T1;
    }
  }
  return next;
}

ActiveSets sets_from_displacement(const std::vector<TracePoint>& trace, double tol) {
  ActiveSets sets = ActiveSets::initial(static_cast<int>(trace.size()));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    sets.normal[i] = trace[i].u_nu < -tol  ? NormalState::N1
                     : trace[i].u_nu > tol ? NormalState::N3
                                           : NormalState::N2;
    if (std::abs(trace[i].u_tau) > tol) {
      sets.tangential[i] = TangentialState::T2;
      sets.slip_direction[i] = trace[i].u_tau > 0.0 ? 1.0 : -1.0;
    }
  }
  return sets;
}

SolveResult solve_pdas(const ReducedSystem& reduced, const ContactLaw& law, const PdasConfig& config,
                       const std::optional<Eigen::VectorXd>& warm_start, PdasExtras* extras) {
  const auto started = std::chrono::steady_clock::now();
  law.validate();
  config.validate();
  const DiscreteSystem& system = reduced.system();
  const int nodes = system.num_contact_nodes();
  const auto& weights = system.weights();

  ActiveSets sets = ActiveSets::initial(nodes);
  if (warm_start) {
    sets = sets_from_displacement(reduced_trace(reduced.contact_part(*warm_start)), 1e-10);
  }

  SolveResult result;
  result.method = Method::PDAS;
  result.denominator = system.disc.denominator();
  result.status = SolveStatus::NotConverged;

  std::deque<ActiveSets> recent;
  std::vector<ActiveSets> trajectory{sets};
  Subproblem best;
  ActiveSets best_sets = sets;
  double best_violation = std::numeric_limits<double>::infinity();
  Subproblem current;
  for (int iter = 1; iter <= config.max_outer; ++iter) {
    current = solve_subproblem(reduced, law, sets);
    result.iterations = iter;
    const auto trace = reduced_trace(current.u_C);
    const double violation = law_violation(trace, current.traction, weights, law, 1e-10);
    result.history.push_back(violation);
    if (violation < best_violation) {
      best_violation = violation;
      best = current;
      best_sets = sets;
    }

    ActiveSets next = classify(trace, current.traction, sets, law, config.eps_stab);
    if (next == sets) {
      result.status = SolveStatus::Converged;
      break;
    }
    recent.push_back(sets);
    if (static_cast<int>(recent.size()) > config.cycle_history) recent.pop_front();
    sets = std::move(next);
    trajectory.push_back(sets);
    if (std::find(recent.begin(), recent.end(), sets) != recent.end()) {
      result.status = SolveStatus::Cycled;
      current = best;
      sets = best_sets;
      break;
    }
  }
  if (result.status == SolveStatus::NotConverged) {
    current = best;
    sets = best_sets;
  }

  result.u = reduced.recover_interior(current.u_C);
  result.contact = describe_contact(system, result.u);
  for (int i = 0; i < nodes; ++i) {
    result.contact[i].normal = sets.normal[i];
    result.contact[i].tangential = sets.tangential[i];
  }
  result.objective = 0.5 * result.u.dot(system.K * result.u) - system.F.dot(result.u) +
                     j_boundary(contact_trace(system.dofs(), result.u), weights, law);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (extras) {
    extras->sets = sets;
    extras->trajectory = std::move(trajectory);
  }
  return result;
}

}  // namespace hemi
