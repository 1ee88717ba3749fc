#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace hemi {

/// Thrown for malformed problem input (bad mesh size, mismatched vectors, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BoundaryPart { Dirichlet, Neumann, Contact };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryPart part = BoundaryPart::Neumann;
};

/**
 * Uniform P1 triangulation of the unit square with n = 1/h cells per side.
 *
 * Node (i, j) sits at (i h, j h) and has index j (n + 1) + i. Every grid
 * square is split along its bottom-left to top-right diagonal, so refining
 * n -> 2n yields a nested mesh.
 */
struct TriMesh {
  int n = 0;
  double h = 0.0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  int node_index(int i, int j) const { return j * (n + 1) + i; }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double signed_area(int t) const;
};

/// Returns n = 1/h, rejecting h whose reciprocal is not an integer >= 2.
int mesh_denominator(double h);

TriMesh build_uniform_mesh(int denominator);

/**
 * Degrees of freedom of the nodes not clamped on x = 0. Each free node
 * carries two consecutive DOFs (x then y component) in node order.
 */
struct DofMap {
  static constexpr int kConstrained = -1;

  std::vector<int> free_nodes;
  std::vector<int> contact_nodes;  // free nodes on y = 0, by increasing x
  std::vector<int> dof_of_node;    // first DOF of node or kConstrained
  std::vector<int> contact_dofs;   // (x, y) DOF pairs of contact_nodes

  int num_dofs() const { return 2 * static_cast<int>(free_nodes.size()); }
  int num_contact_nodes() const { return static_cast<int>(contact_nodes.size()); }
  bool is_free(int node) const { return dof_of_node[node] != kConstrained; }
};

DofMap build_dof_map(const TriMesh& mesh);

/// Outward normal and lumped (trapezoidal) boundary weights on y = 0.
struct ContactGeometry {
  Eigen::Vector2d outward_normal{0.0, -1.0};
  std::vector<double> node_weights;  // aligned with DofMap::contact_nodes
};

ContactGeometry build_contact_geometry(const TriMesh& mesh, const DofMap& dofs);

/// Mesh, DOF numbering and contact geometry for one mesh size.
struct Discretization {
  TriMesh mesh;
  DofMap dofs;
  ContactGeometry contact;

  int denominator() const { return mesh.n; }
};

Discretization discretize(int denominator);

/// Normal and tangential displacement of one contact node.
struct TracePoint {
  double u_nu = 0.0;   // u . nu = -u_y, positive means penetration
  double u_tau = 0.0;  // tangential component along +x
};

std::vector<TracePoint> contact_trace(const DofMap& dofs, const Eigen::VectorXd& u);

/// Scatters free-DOF values into a (2 * num_nodes) nodal vector with zeros on x = 0.
Eigen::VectorXd expand_to_nodes(const DofMap& dofs, const Eigen::VectorXd& u);

/// Inverse of expand_to_nodes; constrained node values are dropped.
Eigen::VectorXd restrict_to_dofs(const DofMap& dofs, const Eigen::VectorXd& nodal);

/// Nodal interpolant of a vector field, restricted to the free DOFs.
template <typename Field>
Eigen::VectorXd interpolate(const Discretization& disc, Field&& field) {
  Eigen::VectorXd nodal(2 * disc.mesh.num_nodes());
  for (int k = 0; k < disc.mesh.num_nodes(); ++k) {
    const Eigen::Vector2d value = field(disc.mesh.nodes[k]);
    nodal[2 * k] = value.x();
    nodal[2 * k + 1] = value.y();
  }
  return restrict_to_dofs(disc.dofs, nodal);
}

/**
 * Exact P1 prolongation from mesh n to mesh 2n. New nodes take the average
 * of the two coarse endpoints of the edge they bisect.
 */
Eigen::VectorXd prolong(const Discretization& coarse, const Eigen::VectorXd& u_coarse,
                        const Discretization& fine);

}  // namespace hemi
