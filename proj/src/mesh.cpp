#include "hemi/mesh.hpp"

#include <cmath>
#include <string>

namespace hemi {

double TriMesh::signed_area(int t) const {
  const auto& [a, b, c] = triangles[t];
  const Eigen::Vector2d e1 = nodes[b] - nodes[a];
  const Eigen::Vector2d e2 = nodes[c] - nodes[a];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

int mesh_denominator(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InputError("mesh size must be positive and finite");
  }
  const double inv = 1.0 / h;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded) {
    throw InputError("1/h must be an integer, got h = " + std::to_string(h));
  }
  if (rounded < 2.0) {
    throw InputError("1/h must be at least 2");
  }
  return static_cast<int>(rounded);
}

TriMesh build_uniform_mesh(int denominator) {
  if (denominator < 2) {
    throw InputError("mesh denominator must be at least 2");
  }
  TriMesh mesh;
  const int n = denominator;
  mesh.n = n;
  mesh.h = 1.0 / n;

  mesh.nodes.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // i / n rather than i * h keeps lattice points exact at i = n.
      mesh.nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = mesh.node_index(i, j);
      const int br = mesh.node_index(i + 1, j);
      const int tl = mesh.node_index(i, j + 1);
      const int tr = mesh.node_index(i + 1, j + 1);
      mesh.triangles.push_back({bl, br, tr});
      mesh.triangles.push_back({bl, tr, tl});
    }
  }

  // Counterclockwise walk around the square.
  mesh.boundary_edges.reserve(4 * n);
  for (int i = 0; i < n; ++i) {
    mesh.boundary_edges.push_back(
        {mesh.node_index(i, 0), mesh.node_index(i + 1, 0), BoundaryPart::Contact});
  }
  for (int j = 0; j < n; ++j) {
    mesh.boundary_edges.push_back(
        {mesh.node_index(n, j), mesh.node_index(n, j + 1), BoundaryPart::Neumann});
  }
  for (int i = n; i > 0; --i) {
    mesh.boundary_edges.push_back(
        {mesh.node_index(i, n), mesh.node_index(i - 1, n), BoundaryPart::Neumann});
  }
  for (int j = n; j > 0; --j) {
    mesh.boundary_edges.push_back(
        {mesh.node_index(0, j), mesh.node_index(0, j - 1), BoundaryPart::Dirichlet});
  }
  return mesh;
}

DofMap build_dof_map(const TriMesh& mesh) {
  DofMap dofs;
  const int n = mesh.n;
  dofs.dof_of_node.assign(mesh.num_nodes(), DofMap::kConstrained);
  int next = 0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const int node = mesh.node_index(i, j);
      dofs.free_nodes.push_back(node);
      dofs.dof_of_node[node] = next;
      next += 2;
    }
  }
  // Row j = 0 is already ordered by x.
  for (int i = 1; i <= n; ++i) {
    const int node = mesh.node_index(i, 0);
    dofs.contact_nodes.push_back(node);
    dofs.contact_dofs.push_back(dofs.dof_of_node[node]);
    dofs.contact_dofs.push_back(dofs.dof_of_node[node] + 1);
  }
  return dofs;
}

ContactGeometry build_contact_geometry(const TriMesh& mesh, const DofMap& dofs) {
  ContactGeometry geometry;
  std::vector<double> weight(mesh.num_nodes(), 0.0);
  for (const auto& edge : mesh.boundary_edges) {
    if (edge.part != BoundaryPart::Contact) continue;
    const double half = 0.5 * (mesh.nodes[edge.b] - mesh.nodes[edge.a]).norm();
    weight[edge.a] += half;
    weight[edge.b] += half;
  }
  geometry.node_weights.reserve(dofs.contact_nodes.size());
  for (int node : dofs.contact_nodes) geometry.node_weights.push_back(weight[node]);
  return geometry;
}

Discretization discretize(int denominator) {
  Discretization disc;
  disc.mesh = build_uniform_mesh(denominator);
  disc.dofs = build_dof_map(disc.mesh);
  disc.contact = build_contact_geometry(disc.mesh, disc.dofs);
  return disc;
}

std::vector<TracePoint> contact_trace(const DofMap& dofs, const Eigen::VectorXd& u) {
  if (u.size() != dofs.num_dofs()) {
    throw InputError("displacement has " + std::to_string(u.size()) + " entries, expected " +
                     std::to_string(dofs.num_dofs()));
  }
  std::vector<TracePoint> trace(dofs.contact_nodes.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const int dof = dofs.contact_dofs[2 * k];
    trace[k].u_tau = u[dof];
    trace[k].u_nu = -u[dof + 1];
  }
  return trace;
}

Eigen::VectorXd expand_to_nodes(const DofMap& dofs, const Eigen::VectorXd& u) {
  if (u.size() != dofs.num_dofs()) {
    throw InputError("displacement size does not match the DOF map");
  }
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(dofs.dof_of_node.size()));
  for (std::size_t node = 0; node < dofs.dof_of_node.size(); ++node) {
    const int dof = dofs.dof_of_node[node];
    if (dof == DofMap::kConstrained) continue;
    nodal[2 * node] = u[dof];
    nodal[2 * node + 1] = u[dof + 1];
  }
  return nodal;
}

Eigen::VectorXd restrict_to_dofs(const DofMap& dofs, const Eigen::VectorXd& nodal) {
  if (nodal.size() != 2 * static_cast<Eigen::Index>(dofs.dof_of_node.size())) {
    throw InputError("nodal vector size does not match the mesh");
  }
  Eigen::VectorXd u(dofs.num_dofs());
  for (std::size_t node = 0; node < dofs.dof_of_node.size(); ++node) {
    const int dof = dofs.dof_of_node[node];
    if (dof == DofMap::kConstrained) continue;
    u[dof] = nodal[2 * node];
    u[dof + 1] = nodal[2 * node + 1];
  }
  return u;
}

Eigen::VectorXd prolong(const Discretization& coarse, const Eigen::VectorXd& u_coarse,
                        const Discretization& fine) {
  const int nc = coarse.mesh.n;
  if (fine.mesh.n != 2 * nc) {
    throw InputError("prolongation needs a fine mesh with exactly twice the cells per side");
  }
  const Eigen::VectorXd cv = expand_to_nodes(coarse.dofs, u_coarse);
  const auto coarse_value = [&](int i, int j) -> Eigen::Vector2d {
    const int k = coarse.mesh.node_index(i, j);
    return {cv[2 * k], cv[2 * k + 1]};
  };

  const int nf = fine.mesh.n;
  Eigen::VectorXd fv(2 * fine.mesh.num_nodes());
  for (int j = 0; j <= nf; ++j) {
    for (int i = 0; i <= nf; ++i) {
      Eigen::Vector2d value;
      const bool odd_i = i % 2 != 0;
      const bool odd_j = j % 2 != 0;
      if (!odd_i && !odd_j) {
        value = coarse_value(i / 2, j / 2);
      } else if (odd_i && !odd_j) {
        value = 0.5 * (coarse_value(i / 2, j / 2) + coarse_value(i / 2 + 1, j / 2));
      } else if (!odd_i && odd_j) {
        value = 0.5 * (coarse_value(i / 2, j / 2) + coarse_value(i / 2, j / 2 + 1));
      } else {
        // Midpoint of a coarse bottom-left to top-right diagonal.
        value = 0.5 * (coarse_value(i / 2, j / 2) + coarse_value(i / 2 + 1, j / 2 + 1));
      }
      const int k = fine.mesh.node_index(i, j);
      fv[2 * k] = value.x();
      fv[2 * k + 1] = value.y();
    }
  }
  return restrict_to_dofs(fine.dofs, fv);
}

}  // namespace hemi
