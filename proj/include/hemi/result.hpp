#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hemi/assembly.hpp"

namespace hemi {

enum class Method { Opt, AL, PDAS };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

enum class SolveStatus { Converged, NotConverged, Cycled, Diverged };

std::string_view to_string(SolveStatus status);

/// Branch of the normal law: open gap, rigid contact, flexible contact.
enum class NormalState { N1, N2, N3 };
/// Stick or slip.
enum class TangentialState { T1, T2 };

std::string_view to_string(NormalState state);
std::string_view to_string(TangentialState state);

struct ContactNodeResult {
  int node = 0;
  double x = 0.0;
  double u_nu = 0.0;
  double u_tau = 0.0;
  double sigma_nu = 0.0;
  double sigma_tau = 0.0;
  NormalState normal = NormalState::N1;
  TangentialState tangential = TangentialState::T1;

  double pressure() const { return -sigma_nu; }
};

struct SolveResult {
  Method method = Method::Opt;
  int denominator = 0;
  Eigen::VectorXd u;  // free DOFs
  std::vector<ContactNodeResult> contact;
  // AL only: per contact node (pressure estimate, friction force estimate).
  Eigen::VectorXd multipliers;
  SolveStatus status = SolveStatus::NotConverged;
  int iterations = 0;
  long evaluations = 0;
  double objective = 0.0;
  std::vector<double> history;
  double seconds = 0.0;

  bool converged() const { return status == SolveStatus::Converged; }
};

/**
 * Fills per-node displacement trace and discrete reaction tractions. The
 * contact states are read off the displacement with tolerance `state_tol`
 * (|u| <= state_tol counts as zero).
 */
std::vector<ContactNodeResult> describe_contact(const DiscreteSystem& system, const Eigen::VectorXd& u,
                                                double state_tol = 1e-8);

}  // namespace hemi
