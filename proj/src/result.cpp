#include "hemi/result.hpp"

#include <cmath>
#include <string>

namespace hemi {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Opt: return "opt";
    case Method::AL: return "al";
    case Method::PDAS: return "pdas";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "opt") return Method::Opt;
  if (name == "al") return Method::AL;
  if (name == "pdas") return Method::PDAS;
  throw InputError("unknown method '" + std::string(name) + "' (expected opt, al or pdas)");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NotConverged: return "not_converged";
    case SolveStatus::Cycled: return "cycled";
    case SolveStatus::Diverged: return "diverged";
  }
  return "?";
}

std::string_view to_string(NormalState state) {
  switch (state) {
    case NormalState::N1: return "N1";
    case NormalState::N2: return "N2";
    case NormalState::N3: return "N3";
  }
  return "?";
}

std::string_view to_string(TangentialState state) {
  return state == TangentialState::T1 ? "T1" : "T2";
}

std::vector<ContactNodeResult> describe_contact(const DiscreteSystem& system, const Eigen::VectorXd& u,
                                                double state_tol) {
  const auto trace = contact_trace(system.dofs(), u);
  const auto traction = contact_reaction(system, u);
  std::vector<ContactNodeResult> out(trace.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& node = out[k];
    node.node = system.dofs().contact_nodes[k];
    node.x = system.disc.mesh.nodes[node.node].x();
    node.u_nu = trace[k].u_nu;
    node.u_tau = trace[k].u_tau;
    node.sigma_nu = traction[k].sigma_nu;
    node.sigma_tau = traction[k].sigma_tau;
    node.normal = node.u_nu < -state_tol ? NormalState::N1
                  : node.u_nu > state_tol ? NormalState::N3
                                          : NormalState::N2;
    node.tangential = std::abs(node.u_tau) > state_tol ? TangentialState::T2 : TangentialState::T1;
  }
  return out;
}

}  // namespace hemi
