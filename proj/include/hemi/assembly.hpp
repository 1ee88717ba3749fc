#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hemi/mesh.hpp"

namespace hemi {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Isotropic Hooke law A(tau) = 2 eta tau + lambda tr(tau) I.
struct MaterialLaw {
  double lambda = 4.0;
  double eta = 4.0;

  void validate() const;
  /// Strong monotonicity constant of A.
  double monotonicity() const { return 2.0 * eta; }
};

struct BodyLoad {
  Eigen::Vector2d f0 = Eigen::Vector2d::Zero();  // per unit area
  Eigen::Vector2d fN = Eigen::Vector2d::Zero();  // per unit length on the Neumann part
};

/// Stress for a symmetric strain; rejects asymmetry above 1e-12.
Eigen::Matrix2d elasticity_apply(const MaterialLaw& mat, const Eigen::Matrix2d& strain);

/// Stiffness over all 2 * num_nodes nodal DOFs, before clamping x = 0.
SparseMatrix assemble_full_stiffness(const TriMesh& mesh, const MaterialLaw& mat);

struct StiffnessPair {
  SparseMatrix K;    // energy form (A eps(u), eps(v))
  SparseMatrix M_V;  // inner product (eps(u), eps(v)) of V
};

StiffnessPair assemble_stiffness(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat);

Eigen::VectorXd assemble_load(const TriMesh& mesh, const DofMap& dofs, const BodyLoad& load);

/// Assembled linear part of one discrete problem. Immutable once built.
struct DiscreteSystem {
  Discretization disc;
  MaterialLaw material;
  BodyLoad load;
  SparseMatrix K;
  SparseMatrix M_V;
  Eigen::VectorXd F;

  const DofMap& dofs() const { return disc.dofs; }
  const std::vector<double>& weights() const { return disc.contact.node_weights; }
  int num_contact_nodes() const { return disc.dofs.num_contact_nodes(); }
};

DiscreteSystem assemble_system(int denominator, const MaterialLaw& mat, const BodyLoad& load);

double v_norm(const SparseMatrix& M_V, const Eigen::VectorXd& v);

/**
 * V-norm of u_ref - u_h on the reference mesh, after prolonging u_h through
 * every intermediate level. `reference` must be a dyadic refinement of `coarse`.
 */
double v_error(const DiscreteSystem& reference, const Eigen::VectorXd& u_ref,
               const Discretization& coarse, const Eigen::VectorXd& u_h);

/// Prolongs through all dyadic levels between `coarse` and `fine`.
Eigen::VectorXd prolong_to(const Discretization& coarse, const Eigen::VectorXd& u,
                           const Discretization& fine);

Eigen::Matrix2d element_strain(const TriMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u,
                               int triangle);
Eigen::Matrix2d element_stress(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat,
                               const Eigen::VectorXd& u, int triangle);

/// Normal stress and tangential (x) stress at a contact node.
struct NodalTraction {
  double sigma_nu = 0.0;
  double sigma_tau = 0.0;
};

/// Nodal traction from the area-weighted average of the adjacent element stresses.
NodalTraction contact_traction_at(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat,
                                  const Eigen::VectorXd& u, int node);
std::vector<NodalTraction> contact_traction(const TriMesh& mesh, const DofMap& dofs,
                                            const MaterialLaw& mat, const Eigen::VectorXd& u);

/**
 * Traction consistent with the discrete equilibrium: the contact rows of
 * K u - F divided by the lumped weights. This is the force the boundary law
 * has to supply at each node.
 */
std::vector<NodalTraction> contact_reaction(const DiscreteSystem& system, const Eigen::VectorXd& u);

}  // namespace hemi
