#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hemi/contact_laws.hpp"
#include "hemi/powell.hpp"
#include "hemi/result.hpp"
#include "hemi/schur.hpp"

namespace hemi {

/**
 * Reduced energy 1/2 u_C' S u_C - g' u_C + J(gamma u_C) over the contact
 * DOFs. The interior constant of the full energy is dropped.
 */
class ReducedObjective final : public Objective {
 public:
  ReducedObjective(const ReducedSystem& reduced, const ContactLaw& law);

  double value(const Eigen::VectorXd& u_C) const override;
  std::function<double(double)> along(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const override;

  long evaluations() const { return evaluations_; }

 private:
  double boundary_term(const Eigen::VectorXd& u_C) const;

  const ReducedSystem& reduced_;
  ContactLaw law_;
  std::vector<double> weights_;
  mutable long evaluations_ = 0;
};

SolveResult solve_direct(const ReducedSystem& reduced, const ContactLaw& law, const PowellConfig& config,
                         const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

}  // namespace hemi
