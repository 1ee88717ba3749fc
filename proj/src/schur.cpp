#include "hemi/schur.hpp"

#include <stdexcept>

namespace hemi {

ReducedSystem::ReducedSystem(std::shared_ptr<const DiscreteSystem> system) : system_(std::move(system)) {
  const DofMap& dofs = system_->dofs();
  const int n = dofs.num_dofs();
  const int nc = static_cast<int>(dofs.contact_dofs.size());

  // Position of each free DOF inside its block; contact DOFs are encoded as -(k + 1).
  std::vector<int> block_index(n, 0);
  for (int k = 0; k < nc; ++k) block_index[dofs.contact_dofs[k]] = -(k + 1);
  for (int d = 0; d < n; ++d) {
    if (block_index[d] < 0) continue;
    block_index[d] = static_cast<int>(interior_dofs_.size());
    interior_dofs_.push_back(d);
  }
  const int ni = static_cast<int>(interior_dofs_.size());

  std::vector<Eigen::Triplet<double>> ii, ic;
  Eigen::MatrixXd K_CC = Eigen::MatrixXd::Zero(nc, nc);
  const SparseMatrix& K = system_->K;
  for (int col = 0; col < K.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const int r = block_index[it.row()];
      const int c = block_index[it.col()];
      if (r >= 0 && c >= 0) {
        ii.emplace_back(r, c, it.value());
      } else if (r >= 0) {
        ic.emplace_back(r, -c - 1, it.value());
      } else if (c < 0) {
        K_CC(-r - 1, -c - 1) = it.value();
      }
    }
  }
  K_II_.resize(ni, ni);
  K_II_.setFromTriplets(ii.begin(), ii.end());
  K_IC_.resize(ni, nc);
  K_IC_.setFromTriplets(ic.begin(), ic.end());

  F_I_.resize(ni);
  for (int k = 0; k < ni; ++k) F_I_[k] = system_->F[interior_dofs_[k]];
  Eigen::VectorXd F_C(nc);
  for (int k = 0; k < nc; ++k) F_C[k] = system_->F[dofs.contact_dofs[k]];

  interior_factor_ = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(K_II_);
  if (interior_factor_->info() != Eigen::Success) {
    throw std::runtime_error("interior stiffness block is not positive definite");
  }

  const Eigen::MatrixXd coupling = K_IC_;
  const Eigen::MatrixXd solved = interior_factor_->solve(coupling);  // K_II^-1 K_IC
  S_ = K_CC - coupling.transpose() * solved;
  S_ = 0.5 * (S_ + S_.transpose());
  const Eigen::VectorXd interior_load = interior_factor_->solve(F_I_);
  g_ = F_C - coupling.transpose() * interior_load;
  energy_offset_ = -0.5 * F_I_.dot(interior_load);
}

Eigen::VectorXd ReducedSystem::recover_interior(const Eigen::VectorXd& u_C) const {
  if (u_C.size() != size()) {
    throw InputError("reduced displacement has the wrong length");
  }
  const DofMap& dofs = system_->dofs();
  const Eigen::VectorXd u_I = interior_factor_->solve(F_I_ - K_IC_ * u_C);
  Eigen::VectorXd u(dofs.num_dofs());
  for (std::size_t k = 0; k < interior_dofs_.size(); ++k) u[interior_dofs_[k]] = u_I[k];
  for (int k = 0; k < size(); ++k) u[dofs.contact_dofs[k]] = u_C[k];
  return u;
}

Eigen::VectorXd ReducedSystem::contact_part(const Eigen::VectorXd& u) const {
  const DofMap& dofs = system_->dofs();
  if (u.size() != dofs.num_dofs()) throw InputError("displacement size does not match the DOF map");
  Eigen::VectorXd u_C(size());
  for (int k = 0; k < size(); ++k) u_C[k] = u[dofs.contact_dofs[k]];
  return u_C;
}

}  // namespace hemi
