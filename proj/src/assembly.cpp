#include "hemi/assembly.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace hemi {

namespace {

using Gradients = std::array<Eigen::Vector2d, 3>;

Gradients basis_gradients(const TriMesh& mesh, int t, double* area) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d& p0 = mesh.nodes[tri[0]];
  const Eigen::Vector2d& p1 = mesh.nodes[tri[1]];
  const Eigen::Vector2d& p2 = mesh.nodes[tri[2]];
  const double twice_area = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  *area = 0.5 * twice_area;
  return {Eigen::Vector2d{p1.y() - p2.y(), p2.x() - p1.x()} / twice_area,
          Eigen::Vector2d{p2.y() - p0.y(), p0.x() - p2.x()} / twice_area,
          Eigen::Vector2d{p0.y() - p1.y(), p1.x() - p0.x()} / twice_area};
}

// Element matrix of (2 eta eps(u) + lambda tr eps(u) I) : eps(v), ordered (node a, component k).
Eigen::Matrix<double, 6, 6> element_matrix(const Gradients& g, double area, double lambda, double eta) {
  Eigen::Matrix<double, 6, 6> ke;
  for (int a = 0; a < 3; ++a) {
    for (int k = 0; k < 2; ++k) {
      for (int b = 0; b < 3; ++b) {
        for (int l = 0; l < 2; ++l) {
          const double delta = k == l ? g[a].dot(g[b]) : 0.0;
          ke(2 * a + k, 2 * b + l) =
              area * (eta * (delta + g[a][l] * g[b][k]) + lambda * g[a][k] * g[b][l]);
        }
      }
    }
  }
  return ke;
}

// dof_index maps a nodal DOF (2 * node + component) to a matrix row or -1.
SparseMatrix assemble_form(const TriMesh& mesh, double lambda, double eta, int size,
                           const std::function<int(int)>& dof_index) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double area = 0.0;
    const Gradients g = basis_gradients(mesh, t, &area);
    const auto ke = element_matrix(g, area, lambda, eta);
    const auto& tri = mesh.triangles[t];
    for (int r = 0; r < 6; ++r) {
      const int row = dof_index(2 * tri[r / 2] + r % 2);
      if (row < 0) continue;
      for (int c = 0; c < 6; ++c) {
        const int col = dof_index(2 * tri[c / 2] + c % 2);
        if (col < 0) continue;
        triplets.emplace_back(row, col, ke(r, c));
      }
    }
  }
  SparseMatrix matrix(size, size);
  // setFromTriplets sums duplicates in a fixed order, so assembly is deterministic.
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return matrix;
}

std::function<int(int)> free_dof_index(const DofMap& dofs) {
  return [&dofs](int nodal) {
    const int first = dofs.dof_of_node[nodal / 2];
    return first == DofMap::kConstrained ? -1 : first + nodal % 2;
  };
}

}  // namespace

void MaterialLaw::validate() const {
  if (!(lambda > 0.0) || !(eta > 0.0) || !std::isfinite(lambda) || !std::isfinite(eta)) {
    throw InputError("Lame coefficients must be positive and finite");
  }
}

Eigen::Matrix2d elasticity_apply(const MaterialLaw& mat, const Eigen::Matrix2d& strain) {
  if (std::abs(strain(0, 1) - strain(1, 0)) > 1e-12) {
    throw InputError("strain tensor must be symmetric");
  }
  return 2.0 * mat.eta * strain + mat.lambda * strain.trace() * Eigen::Matrix2d::Identity();
}

SparseMatrix assemble_full_stiffness(const TriMesh& mesh, const MaterialLaw& mat) {
  return assemble_form(mesh, mat.lambda, mat.eta, 2 * mesh.num_nodes(), [](int nodal) { return nodal; });
}

StiffnessPair assemble_stiffness(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat) {
  mat.validate();
  const auto index = free_dof_index(dofs);
  return {assemble_form(mesh, mat.lambda, mat.eta, dofs.num_dofs(), index),
          assemble_form(mesh, 0.0, 0.5, dofs.num_dofs(), index)};
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const DofMap& dofs, const BodyLoad& load) {
  if (!load.f0.allFinite() || !load.fN.allFinite()) {
    throw InputError("loads must be finite");
  }
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.num_dofs());
  const auto add = [&](int node, const Eigen::Vector2d& force) {
    const int dof = dofs.dof_of_node[node];
    if (dof == DofMap::kConstrained) return;
    F[dof] += force.x();
    F[dof + 1] += force.y();
  };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector2d share = load.f0 * (mesh.signed_area(t) / 3.0);
    for (int node : mesh.triangles[t]) add(node, share);
  }
  for (const auto& edge : mesh.boundary_edges) {
    if (edge.part != BoundaryPart::Neumann) continue;
    const double half = 0.5 * (mesh.nodes[edge.b] - mesh.nodes[edge.a]).norm();
    add(edge.a, load.fN * half);
    add(edge.b, load.fN * half);
  }
  return F;
}

DiscreteSystem assemble_system(int denominator, const MaterialLaw& mat, const BodyLoad& load) {
  DiscreteSystem system;
  system.disc = discretize(denominator);
  system.material = mat;
  system.load = load;
  auto [K, M_V] = assemble_stiffness(system.disc.mesh, system.disc.dofs, mat);
  system.K = std::move(K);
  system.M_V = std::move(M_V);
  system.F = assemble_load(system.disc.mesh, system.disc.dofs, load);
  return system;
}

double v_norm(const SparseMatrix& M_V, const Eigen::VectorXd& v) {
  if (v.size() != M_V.rows()) throw InputError("vector size does not match the Gram matrix");
  return std::sqrt(std::max(0.0, v.dot(M_V * v)));
}

Eigen::VectorXd prolong_to(const Discretization& coarse, const Eigen::VectorXd& u,
                           const Discretization& fine) {
  int n = coarse.denominator();
  if (fine.denominator() < n || fine.denominator() % n != 0) {
    throw InputError("meshes are not nested");
  }
  if (fine.denominator() == n) return u;
  Eigen::VectorXd current = u;
  Discretization level = coarse;
  while (level.denominator() < fine.denominator()) {
    if (2 * level.denominator() > fine.denominator()) throw InputError("meshes are not dyadically nested");
    Discretization next = 2 * level.denominator() == fine.denominator() ? fine : discretize(2 * level.denominator());
    current = prolong(level, current, next);
    level = std::move(next);
  }
  return current;
}

double v_error(const DiscreteSystem& reference, const Eigen::VectorXd& u_ref,
               const Discretization& coarse, const Eigen::VectorXd& u_h) {
  const Eigen::VectorXd fine_h = prolong_to(coarse, u_h, reference.disc);
  return v_norm(reference.M_V, u_ref - fine_h);
}

Eigen::Matrix2d element_strain(const TriMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u,
                               int triangle) {
  if (u.size() != dofs.num_dofs()) throw InputError("displacement size does not match the DOF map");
  double area = 0.0;
  const Gradients g = basis_gradients(mesh, triangle, &area);
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(i, j) = d u_i / d x_j
  for (int a = 0; a < 3; ++a) {
    const int dof = dofs.dof_of_node[mesh.triangles[triangle][a]];
    if (dof == DofMap::kConstrained) continue;
    const Eigen::Vector2d value{u[dof], u[dof + 1]};
    grad += value * g[a].transpose();
  }
  return 0.5 * (grad + grad.transpose());
}

Eigen::Matrix2d element_stress(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat,
                               const Eigen::VectorXd& u, int triangle) {
  return elasticity_apply(mat, element_strain(mesh, dofs, u, triangle));
}

NodalTraction contact_traction_at(const TriMesh& mesh, const DofMap& dofs, const MaterialLaw& mat,
                                  const Eigen::VectorXd& u, int node) {
  if (node < 0 || node >= mesh.num_nodes() || mesh.nodes[node].y() != 0.0 || !dofs.is_free(node)) {
    throw InputError("node " + std::to_string(node) + " is not a contact node");
  }
  // Triangles touching a bottom-row node live in the first row of squares.
  const int i = node;
  Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
  double total_area = 0.0;
  for (int square = std::max(0, i - 1); square <= std::min(mesh.n - 1, i); ++square) {
    for (int t = 2 * square; t < 2 * square + 2; ++t) {
      const auto& tri = mesh.triangles[t];
      if (tri[0] != node && tri[1] != node && tri[2] != node) continue;
      const double area = mesh.signed_area(t);
      sum += area * element_stress(mesh, dofs, mat, u, t);
      total_area += area;
    }
  }
  const Eigen::Matrix2d sigma = sum / total_area;
  const Eigen::Vector2d normal{0.0, -1.0};
  const Eigen::Vector2d traction = sigma * normal;
  const double sigma_nu = traction.dot(normal);
  return {sigma_nu, (traction - sigma_nu * normal).x()};
}

std::vector<NodalTraction> contact_traction(const TriMesh& mesh, const DofMap& dofs,
                                            const MaterialLaw& mat, const Eigen::VectorXd& u) {
  std::vector<NodalTraction> out;
  out.reserve(dofs.contact_nodes.size());
  for (int node : dofs.contact_nodes) out.push_back(contact_traction_at(mesh, dofs, mat, u, node));
  return out;
}

std::vector<NodalTraction> contact_reaction(const DiscreteSystem& system, const Eigen::VectorXd& u) {
  if (u.size() != system.dofs().num_dofs()) throw InputError("displacement size does not match the DOF map");
  const Eigen::VectorXd residual = system.K * u - system.F;
  const auto& dofs = system.dofs();
  std::vector<NodalTraction> out(dofs.contact_nodes.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double w = system.weights()[k];
    const int dof = dofs.contact_dofs[2 * k];
    // Traction sigma nu = r / w; nu = (0, -1) gives sigma_nu = -r_y / w.
    out[k].sigma_tau = residual[dof] / w;
    out[k].sigma_nu = -residual[dof + 1] / w;
  }
  return out;
}

}  // namespace hemi
