#ifndef CUTPLUG_QUADRATURE_HPP
#define CUTPLUG_QUADRATURE_HPP

#include <array>
#include <vector>

#include "cutplug/mesh.hpp"

namespace cutplug {

// Six-point, degree-4 triangle rule. Weights sum to 1 and scale by the
// triangle area.
struct TriQuadPoint {
  double l0, l1, l2;  // barycentric
  double w;
};
const std::array<TriQuadPoint, 6>& tri_quadrature_6();

// Three-point Gauss-Legendre on [0,1] (degree 5).
struct SegQuadPoint {
  double s;
  double w;
};
const std::array<SegQuadPoint, 3>& seg_quadrature_3();

// Quadratic Lagrange triangle. Local DOFs: 3 vertices then midpoints of local
// edges (0,1), (1,2), (2,0), matching Cell::facets order.
struct P2Basis {
  std::array<double, 6> N;
  std::array<std::array<double, 2>, 6> grad;  // physical gradient
};

// Geometry of one affine cell, cached for basis evaluation.
struct CellFrame {
  std::array<Point2, 3> p;
  double area = 0.0;
  // inverse Jacobian transpose columns: grad(lambda1), grad(lambda2)
  double g1x, g1y, g2x, g2y;

  explicit CellFrame(const Mesh& mesh, int cell);
  std::array<double, 3> barycentric(const Point2& q) const;
  P2Basis eval(const Point2& q) const;
  // Constant Hessians of the six shape functions: (Hxx, Hxy, Hyy) each.
  std::array<std::array<double, 3>, 6> hessians() const;
};

// P1 hat values at a physical point (barycentric coordinates).
// P1 hat gradients are columns of the frame: grad(lambda0) = -(g1+g2), etc.

// Continuous P2 space on the whole mesh: vertex DOFs then one DOF per facet
// midpoint. `active` marks DOFs whose basis support meets the acoustic domain
// with positive measure (all incident cells Outside -> inactive).
struct P2Space {
  int n_vertex_dofs = 0;
  int n_dofs = 0;
  std::vector<bool> active;

  static P2Space build(const Mesh& mesh);
  int vertex_dof(int v) const { return v; }
  int facet_dof(int f) const { return n_vertex_dofs + f; }
  std::array<int, 6> cell_dofs(const Mesh& mesh, int cell) const;
  std::array<int, 3> facet_trace_dofs(const Mesh& mesh, int facet) const;
};

}  // namespace cutplug

#endif
