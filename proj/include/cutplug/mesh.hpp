#ifndef CUTPLUG_MESH_HPP
#define CUTPLUG_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cutplug {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Region : std::uint8_t { FixedAir, DesignRegion };

// Facet tags drive boundary conditions and the design-Poisson Dirichlet set.
enum class FacetTag : std::uint8_t {
  Interior,
  Diaphragm,
  Outlet,
  SymmetryNeumann,
  FixedWall,
  DesignInterfaceDirichlet,
};

struct Cell {
  std::array<int, 3> v{-1, -1, -1};   // vertex ids, CCW
  std::array<int, 3> facets{-1, -1, -1};  // facet opposite-free convention: facet i spans (v[i], v[i+1])
  Region region = Region::FixedAir;
  double diameter = 0.0;  // longest edge
};

// A facet is a mesh edge. Interior facets have two incident cells, boundary
// facets one (cells[1] == -1).
struct Facet {
  std::array<int, 2> v{-1, -1};
  std::array<int, 2> cells{-1, -1};
  FacetTag tag = FacetTag::Interior;
};

struct Mesh {
  std::vector<Point2> points;
  std::vector<Cell> cells;
  std::vector<Facet> facets;
  std::vector<std::vector<int>> vertex_cells;  // vertex -> incident cells

  int n_vertices() const { return static_cast<int>(points.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }

  double cell_area(int c) const;
  Point2 facet_midpoint(int f) const;
  double facet_length(int f) const;
};

// Benchmark dimensions, SI meters. kappa is the compression ratio; the slit
// opening width is derived as l_c / kappa.
struct GeometryParams {
  double l_c = 28e-3;   // chamber length (diaphragm height)
  double d = 0.5e-3;    // chamber depth
  double r_wg = 13e-3;  // waveguide width
  double l_wg = 33e-3;  // waveguide length
  double l_p = 17e-3;   // design region length
  double kappa = 12.0;  // compression ratio

  double slit_width() const { return l_c / kappa; }
  // axial distance diaphragm -> outlet, used by the ideal outlet target
  double axial_length() const { return d + l_p + l_wg; }
};

// Structured triangulation of an axis-aligned rectangle [x0,x0+w] x [y0,y0+h].
// Per-axis pitch equals `pitch` (cell diameters reach sqrt(2)*pitch). Extra
// y-coordinates in `y_breaks` are inserted as grid lines. All cells tagged
// `region`; facet tags left Interior except the outer boundary, which gets
// FixedWall (callers retag).
Mesh build_rect_mesh(double x0, double y0, double w, double h, double pitch,
                     Region region = Region::FixedAir,
                     const std::vector<double>& y_breaks = {});

// Conforming triangulation of the three-rectangle benchmark: chamber
// [0,d]x[0,l_c] with the diaphragm at x=0, design region [d,d+l_p]x[0,l_c],
// waveguide [d+l_p,d+l_p+l_wg]x[0,r_wg] with the outlet at the far end.
// y=0 is the symmetry line; other outer walls are FixedWall. The chamber/design
// interface is DesignInterfaceDirichlet except the slit opening (lowest
// l_c/kappa), which stays Interior. Subdivision pitch is h_target/sqrt(2) per
// axis so every cell diameter is <= h_target.
Mesh build_benchmark_mesh(const GeometryParams& g, double h_target);

// Straight duct [0,length]x[0,width]: diaphragm at x=0, outlet at x=length,
// symmetry line at y=0, fixed wall on top. No design region. Per-axis pitch
// equals `pitch`.
Mesh build_duct_mesh(double width, double length, double pitch);

// Rectangular patch consisting entirely of design-region cells whose outer
// boundary facets on x=x0 are tagged DesignInterfaceDirichlet (test helper
// for synthetic level-set studies).
Mesh build_design_patch(double x0, double y0, double w, double h, double pitch);

// Recomputes the facet->cell adjacency from cell connectivity and validates it
// against the stored one. Returns, per facet, the incident cell ids
// ({c0, -1} on the boundary). Throws with the offending facet id on mismatch
// (every interior facet must have exactly two incident cells, boundary one).
std::vector<std::array<int, 2>> facet_adjacency(const Mesh& mesh);

// Plain-text export: "POINTS n" + coordinate lines, "CELLS m" + vertex/region
// lines, "FACETS k" + vertex/tag lines, 17 significant digits.
void export_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace cutplug

#endif
