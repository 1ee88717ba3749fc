#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hemi/contact_laws.hpp"
#include "hemi/result.hpp"
#include "hemi/schur.hpp"

namespace hemi {

/// Branch assignment of every contact node, with the frozen slip direction of T2 nodes.
struct ActiveSets {
  std::vector<NormalState> normal;
  std::vector<TangentialState> tangential;
  std::vector<double> slip_direction;  // +1 or -1 along x, meaningful for T2

  static ActiveSets initial(int num_nodes);
  int size() const { return static_cast<int>(normal.size()); }
  bool operator==(const ActiveSets&) const = default;
};

struct PdasConfig {
  double eps_stab = 1e-8;
  int max_outer = 100;
  int cycle_history = 6;

  void validate() const;
};

/// Displacement of one linear subproblem with the traction it implies at the contact nodes.
struct Subproblem {
  Eigen::VectorXd u_C;
  std::vector<NodalTraction> traction;  // from the reduced residual S u_C - g
};

/**
 * Solves the linear problem defined by `sets`: N2 clamps u_nu, N3 adds the
 * Robin law -sigma_nu = p_const u_nu + q_max, T1 clamps u_tau, T2 applies the
 * friction force h_tau along the frozen slip direction. N1 is traction free.
 */
Subproblem solve_subproblem(const ReducedSystem& reduced, const ContactLaw& law, const ActiveSets& sets);

/**
 * Reassigns nodes by the transition rules on the contact pressure
 * pi = -sigma_nu (N1 <-> N2 <-> N3 only). A stuck node starts slipping
 * when the friction force -sigma_tau reaches h_tau + eps, in the direction of
 * that force; a slipping node sticks again once its slip runs against the
 * frozen direction by more than eps.
 */
ActiveSets classify(const std::vector<TracePoint>& trace, const std::vector<NodalTraction>& traction,
                    const ActiveSets& previous, const ContactLaw& law, double eps_stab);

/// Sets read off a displacement (used to seed from a warm start).
ActiveSets sets_from_displacement(const std::vector<TracePoint>& trace, double tol);

struct PdasExtras {
  ActiveSets sets;
  std::vector<ActiveSets> trajectory;
};

SolveResult solve_pdas(const ReducedSystem& reduced, const ContactLaw& law, const PdasConfig& config,
                       const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                       PdasExtras* extras = nullptr);

}  // namespace hemi
