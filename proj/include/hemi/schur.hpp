#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "hemi/assembly.hpp"

namespace hemi {

/**
 * Static condensation of K u = F onto the contact DOFs.
 *
 * With I the free non-contact DOFs and C the contact DOFs (node-major, x then
 * y), S = K_CC - K_CI K_II^-1 K_IC and g = F_C - K_CI K_II^-1 F_I. Reduced
 * vectors use the same layout as DofMap::contact_dofs.
 */
class ReducedSystem {
 public:
  explicit ReducedSystem(std::shared_ptr<const DiscreteSystem> system);

  const Eigen::MatrixXd& S() const { return S_; }
  const Eigen::VectorXd& g() const { return g_; }
  const DiscreteSystem& system() const { return *system_; }
  const std::shared_ptr<const DiscreteSystem>& system_ptr() const { return system_; }
  int size() const { return static_cast<int>(g_.size()); }

  /// Full displacement with interior values u_I = K_II^-1 (F_I - K_IC u_C).
  Eigen::VectorXd recover_interior(const Eigen::VectorXd& u_C) const;

  /// Contact part of a full displacement vector.
  Eigen::VectorXd contact_part(const Eigen::VectorXd& u) const;

  /// Constant c such that the full energy at the recovered point equals
  /// 1/2 u_C' S u_C - g' u_C + c.
  double energy_offset() const { return energy_offset_; }

 private:
  std::shared_ptr<const DiscreteSystem> system_;
  std::vector<int> interior_dofs_;
  SparseMatrix K_II_;
  SparseMatrix K_IC_;
  Eigen::VectorXd F_I_;
  std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix>> interior_factor_;
  Eigen::MatrixXd S_;
  Eigen::VectorXd g_;
  double energy_offset_ = 0.0;
};

}  // namespace hemi
