#ifndef CUTPLUG_LEVELSET_HPP
#define CUTPLUG_LEVELSET_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <unordered_map>
#include <vector>

#include "cutplug/mesh.hpp"

namespace cutplug {

// Nodal coefficients of the level-set source phi_hat on the free design
// vertices (design-region vertices not constrained by Dirichlet data).
// Units m^-2 (a Poisson source for a field in meters).
using DesignVector = Eigen::VectorXd;

// P1 level set on design-region vertices. `values` is indexed by global
// vertex id; only design-vertex entries are meaningful.
struct LevelSetField {
  std::vector<double> values;
  int n_perturbed = 0;  // vertices nudged off exact zero on the last classify
};

enum class CellStatus : std::uint8_t { Inside, Outside, Cut };

// One straight piece of the cut boundary inside a cut cell. Oriented with the
// unit normal pointing out of the acoustic domain (towards phi > 0).
struct BoundarySegment {
  int cell = -1;
  Point2 a, b;
  double length = 0.0;
  double nx = 0.0, ny = 0.0;   // unit normal = grad(phi)/|grad(phi)|
  double grad_norm = 0.0;      // |grad(phi)| in the cell
};

// Zero-set crossing of a mesh edge. n_S is the unit vector along the edge
// pointing towards phi > 0 (out of the acoustic domain); dphi_ds is
// |d(phi)/ds| along the edge. Each incident cut facet contributes its index
// and the outward conormal at the crossing (unit tangent of the facet
// pointing away from it). Boundary or interface crossings have one incident
// facet (segment[1] == -1).
struct CutPoint {
  int facet = -1;  // mesh facet (edge) id
  Point2 p;
  double nsx = 0.0, nsy = 0.0;
  double dphi_ds = 0.0;
  std::array<int, 2> segment{-1, -1};           // indices into CutGeometry::segments
  std::array<std::array<double, 2>, 2> m{{{0, 0}, {0, 0}}};  // conormals
};

struct CutGeometry {
  std::vector<CellStatus> status;           // per cell; FixedAir cells are Inside
  std::vector<BoundarySegment> segments;    // one per cut cell
  std::vector<int> cell_segment;            // cell -> segment index or -1
  std::vector<CutPoint> cut_points;
  // Inside part of each cut cell as a CCW polygon (3 or 4 vertices).
  std::vector<std::vector<Point2>> inside_polygons;  // parallel to segments

  double inside_area(const Mesh& mesh) const;
};

// Precomputed design-Poisson workspace for a fixed mesh: vertex sets, the P1
// stiffness/mass blocks on the free design vertices, the Dirichlet coupling,
// and a cached LDLT factorization of the stiffness block.
class DesignPoisson {
 public:
  // dirichlet_data maps vertex id -> prescribed phi value; its key set must be
  // exactly the DesignInterfaceDirichlet vertex set of the mesh unless
  // `custom_dirichlet` allows an arbitrary nonempty set (test configurations).
  DesignPoisson(const Mesh& mesh,
                const std::unordered_map<int, double>& dirichlet_data,
                bool custom_dirichlet = false);

  int n_free() const { return static_cast<int>(free_vertices_.size()); }
  const std::vector<int>& free_vertices() const { return free_vertices_; }
  const std::vector<int>& design_vertices() const { return design_vertices_; }
  int free_index(int vertex) const;  // -1 when not free

  // Solves -Laplace(phi) = phi_hat on the design region with the stored
  // Dirichlet data and natural BCs elsewhere. Relative residual < 1e-12.
  LevelSetField solve(const DesignVector& phi_hat) const;

  // Source whose solve() reproduces the given nodal field exactly:
  // phi_hat = M^-1 (K phi_free + K_fd phi_D).
  DesignVector source_for(const std::vector<double>& nodal_phi) const;

  // dj_design = M^T K^-T dj_free (both matrices symmetric); one extra real
  // solve. Applied to complex data as two real solves.
  Eigen::VectorXcd chain_to_design(const Eigen::VectorXcd& dj_free) const;
  Eigen::VectorXd chain_to_design(const Eigen::VectorXd& dj_free) const;

  const Eigen::SparseMatrix<double>& mass() const { return M_ff_; }
  const Mesh& mesh() const { return mesh_; }

 private:
  const Mesh& mesh_;
  std::vector<int> design_vertices_;
  std::vector<int> free_vertices_;
  std::vector<int> free_index_;  // vertex -> free slot or -1
  std::vector<std::pair<int, double>> dirichlet_;  // (vertex, value)
  Eigen::SparseMatrix<double> K_ff_, M_ff_;
  Eigen::VectorXd lift_;  // K_fd * phi_D
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

// Classifies design-region cells against the P1 level set and extracts the
// cut geometry. Vertex values with |phi| < 1e-12 * scale (scale = max |phi|
// over design vertices, floored at 1e-9 m) are nudged to +1e-12 * scale with
// a warning counted in the field copy that is used. Strict signs after the
// nudge: Inside iff all three < 0, Outside iff all > 0, Cut otherwise.
CutGeometry classify_and_cut(const Mesh& mesh, LevelSetField& phi);

// phi + t * w for a nodal perturbation w on design vertices.
LevelSetField perturb_levelset(const LevelSetField& phi,
                               const std::vector<double>& w, double t);

// "x,y,phi" lines over design vertices, 17 significant digits.
void export_levelset(const Mesh& mesh, const LevelSetField& phi,
                     std::ostream& out);

// "x0,y0,x1,y1" lines over cut boundary segments, 17 significant digits.
void export_boundary_polyline(const CutGeometry& cut, std::ostream& out);

}  // namespace cutplug

#endif
