#include "cutplug/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace cutplug {

namespace {

// Exact coordinate list for [a,b] split into n pieces; endpoints exact so
// rectangle interfaces and tag lines land on shared grid values.
void append_segment_coords(double a, double b, int n, std::vector<double>& out) {
  if (out.empty()) out.push_back(a);
  for (int i = 1; i < n; ++i) out.push_back(a + (b - a) * i / n);
  out.push_back(b);
}

int pieces(double len, double pitch) {
  int n = static_cast<int>(std::ceil(len / pitch - 1e-12));
  return std::max(n, 1);
}

double dist(const Point2& a, const Point2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

// Derives facets, cell->facet links, adjacency, diameters, vertex->cell map.
// Boundary facets get FixedWall; interior ones Interior.
void finalize_mesh(Mesh& mesh) {
  std::map<std::pair<int, int>, int> facet_of;
  mesh.facets.clear();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Cell& cell = mesh.cells[c];
    double dia = 0.0;
    for (int e = 0; e < 3; ++e) {
      const int a = cell.v[e], b = cell.v[(e + 1) % 3];
      dia = std::max(dia, dist(mesh.points[a], mesh.points[b]));
      const auto key = std::minmax(a, b);
      auto it = facet_of.find(key);
      if (it == facet_of.end()) {
        const int id = mesh.n_facets();
        facet_of.emplace(key, id);
        Facet f;
        f.v = {a, b};  // oriented with cells[0]'s CCW walk
        f.cells = {c, -1};
        mesh.facets.push_back(f);
        cell.facets[e] = id;
      } else {
        Facet& f = mesh.facets[it->second];
        if (f.cells[1] != -1)
          throw std::runtime_error("facet " + std::to_string(it->second) +
                                   ": more than two incident cells");
        f.cells[1] = c;
        cell.facets[e] = it->second;
      }
    }
    cell.diameter = dia;
  }
  for (Facet& f : mesh.facets)
    f.tag = (f.cells[1] == -1) ? FacetTag::FixedWall : FacetTag::Interior;
  mesh.vertex_cells.assign(mesh.n_vertices(), {});
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int v : mesh.cells[c].v) mesh.vertex_cells[v].push_back(c);
}

void add_grid_cells(Mesh& mesh, const std::vector<std::vector<int>>& vid,
                    int i0, int i1, int j0, int j1, Region region) {
  for (int i = i0; i < i1; ++i) {
    for (int j = j0; j < j1; ++j) {
      const int bl = vid[i][j], br = vid[i + 1][j];
      const int tl = vid[i][j + 1], tr = vid[i + 1][j + 1];
      Cell c1, c2;
      if ((i + j) % 2 == 0) {
        c1.v = {bl, br, tr};
        c2.v = {bl, tr, tl};
      } else {
        c1.v = {bl, br, tl};
        c2.v = {br, tr, tl};
      }
      c1.region = c2.region = region;
      mesh.cells.push_back(c1);
      mesh.cells.push_back(c2);
    }
  }
}

}  // namespace

double Mesh::cell_area(int c) const {
  const Cell& cell = cells[c];
  const Point2& a = points[cell.v[0]];
  const Point2& b = points[cell.v[1]];
  const Point2& d = points[cell.v[2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x));
}

Point2 Mesh::facet_midpoint(int f) const {
  const Facet& fc = facets[f];
  return {0.5 * (points[fc.v[0]].x + points[fc.v[1]].x),
          0.5 * (points[fc.v[0]].y + points[fc.v[1]].y)};
}

double Mesh::facet_length(int f) const {
  return dist(points[facets[f].v[0]], points[facets[f].v[1]]);
}

Mesh build_rect_mesh(double x0, double y0, double w, double h, double pitch,
                     Region region, const std::vector<double>& y_breaks) {
  if (w <= 0 || h <= 0 || pitch <= 0)
    throw std::invalid_argument("rectangle mesh: non-positive dimension");
  std::vector<double> xs;
  append_segment_coords(x0, x0 + w, pieces(w, pitch), xs);
  std::vector<double> cuts{y0};
  for (double b : y_breaks)
    if (b > y0 && b < y0 + h) cuts.push_back(b);
  cuts.push_back(y0 + h);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> ys;
  for (size_t s = 0; s + 1 < cuts.size(); ++s)
    append_segment_coords(cuts[s], cuts[s + 1], pieces(cuts[s + 1] - cuts[s], pitch), ys);

  Mesh mesh;
  std::vector<std::vector<int>> vid(xs.size(), std::vector<int>(ys.size(), -1));
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < ys.size(); ++j) {
      vid[i][j] = mesh.n_vertices();
      mesh.points.push_back({xs[i], ys[j]});
    }
  add_grid_cells(mesh, vid, 0, static_cast<int>(xs.size()) - 1, 0,
                 static_cast<int>(ys.size()) - 1, region);
  finalize_mesh(mesh);
  return mesh;
}

Mesh build_benchmark_mesh(const GeometryParams& g, double h_target) {
  if (g.l_c <= 0 || g.d <= 0 || g.r_wg <= 0 || g.l_wg <= 0 || g.l_p <= 0 ||
      g.kappa <= 0 || h_target <= 0)
    throw std::invalid_argument("benchmark mesh: non-positive dimension");
  const double slit = g.slit_width();
  if (slit >= g.l_c)
    throw std::invalid_argument("benchmark mesh: slit wider than chamber interface");
  if (slit >= g.r_wg)
    throw std::invalid_argument("benchmark mesh: slit wider than waveguide");
  if (h_target >= g.d)
    throw std::invalid_argument("benchmark mesh: h_target must be below the chamber depth");

  const double pitch = h_target / std::sqrt(2.0);  // keeps diameters <= h_target
  const double x_design = g.d, x_wg = g.d + g.l_p, x_out = g.d + g.l_p + g.l_wg;

  std::vector<double> xs;
  append_segment_coords(0.0, x_design, pieces(g.d, pitch), xs);
  const int ix_design = static_cast<int>(xs.size()) - 1;
  append_segment_coords(x_design, x_wg, pieces(g.l_p, pitch), xs);
  const int ix_wg = static_cast<int>(xs.size()) - 1;
  append_segment_coords(x_wg, x_out, pieces(g.l_wg, pitch), xs);

  std::vector<double> ys;
  append_segment_coords(0.0, slit, pieces(slit, pitch), ys);
  append_segment_coords(slit, g.r_wg, pieces(g.r_wg - slit, pitch), ys);
  const int iy_wg = static_cast<int>(ys.size()) - 1;
  append_segment_coords(g.r_wg, g.l_c, pieces(g.l_c - g.r_wg, pitch), ys);
  const int ny = static_cast<int>(ys.size()) - 1;
  const int nx = static_cast<int>(xs.size()) - 1;

  Mesh mesh;
  std::vector<std::vector<int>> vid(nx + 1, std::vector<int>(ny + 1, -1));
  for (int i = 0; i <= nx; ++i) {
    const int jmax = (i <= ix_wg) ? ny : iy_wg;  // waveguide block is shorter
    for (int j = 0; j <= jmax; ++j) {
      vid[i][j] = mesh.n_vertices();
      mesh.points.push_back({xs[i], ys[j]});
    }
  }
  add_grid_cells(mesh, vid, 0, ix_design, 0, ny, Region::FixedAir);
  add_grid_cells(mesh, vid, ix_design, ix_wg, 0, ny, Region::DesignRegion);
  add_grid_cells(mesh, vid, ix_wg, nx, 0, iy_wg, Region::FixedAir);
  finalize_mesh(mesh);

  for (int fi = 0; fi < mesh.n_facets(); ++fi) {
    Facet& f = mesh.facets[fi];
    const Point2 a = mesh.points[f.v[0]], b = mesh.points[f.v[1]];
    if (f.cells[1] == -1) {
      if (a.x == 0.0 && b.x == 0.0)
        f.tag = FacetTag::Diaphragm;
      else if (a.x == x_out && b.x == x_out)
        f.tag = FacetTag::Outlet;
      else if (a.y == 0.0 && b.y == 0.0)
        f.tag = FacetTag::SymmetryNeumann;
      else
        f.tag = FacetTag::FixedWall;
    } else if (a.x == x_design && b.x == x_design &&
               std::min(a.y, b.y) >= slit) {
      // chamber/design interface above the slit opening
      f.tag = FacetTag::DesignInterfaceDirichlet;
    }
  }

  // The design region must be one edge-connected block.
  std::vector<int> design_cells;
  std::vector<char> seen(mesh.n_cells(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].region == Region::DesignRegion) design_cells.push_back(c);
  if (design_cells.empty())
    throw std::runtime_error("benchmark mesh: empty design region");
  std::queue<int> bfs;
  bfs.push(design_cells.front());
  seen[design_cells.front()] = 1;
  int reached = 0;
  while (!bfs.empty()) {
    const int c = bfs.front();
    bfs.pop();
    ++reached;
    for (int fi : mesh.cells[c].facets) {
      const Facet& f = mesh.facets[fi];
      const int o = (f.cells[0] == c) ? f.cells[1] : f.cells[0];
      if (o != -1 && !seen[o] && mesh.cells[o].region == Region::DesignRegion) {
        seen[o] = 1;
        bfs.push(o);
      }
    }
  }
  if (reached != static_cast<int>(design_cells.size()))
    throw std::runtime_error("benchmark mesh: design region not connected");
  return mesh;
}

Mesh build_duct_mesh(double width, double length, double pitch) {
  Mesh mesh = build_rect_mesh(0.0, 0.0, length, width, pitch);
  for (Facet& f : mesh.facets) {
    if (f.cells[1] != -1) continue;
    const Point2 a = mesh.points[f.v[0]], b = mesh.points[f.v[1]];
    if (a.x == 0.0 && b.x == 0.0)
      f.tag = FacetTag::Diaphragm;
    else if (a.x == length && b.x == length)
      f.tag = FacetTag::Outlet;
    else if (a.y == 0.0 && b.y == 0.0)
      f.tag = FacetTag::SymmetryNeumann;
    else
      f.tag = FacetTag::FixedWall;
  }
  return mesh;
}

Mesh build_design_patch(double x0, double y0, double w, double h, double pitch) {
  Mesh mesh = build_rect_mesh(x0, y0, w, h, pitch, Region::DesignRegion);
  for (Facet& f : mesh.facets) {
    if (f.cells[1] != -1) continue;
    const Point2 a = mesh.points[f.v[0]], b = mesh.points[f.v[1]];
    if (a.x == x0 && b.x == x0) f.tag = FacetTag::DesignInterfaceDirichlet;
  }
  return mesh;
}

std::vector<std::array<int, 2>> facet_adjacency(const Mesh& mesh) {
  std::vector<std::array<int, 2>> adj(mesh.n_facets(), {-1, -1});
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const int fi = mesh.cells[c].facets[e];
      if (fi < 0 || fi >= mesh.n_facets())
        throw std::runtime_error("facet adjacency: cell " + std::to_string(c) +
                                 " references invalid facet");
      if (adj[fi][0] == -1)
        adj[fi][0] = c;
      else if (adj[fi][1] == -1)
        adj[fi][1] = c;
      else
        throw std::runtime_error("facet " + std::to_string(fi) +
                                 ": more than two incident cells");
    }
  }
  for (int fi = 0; fi < mesh.n_facets(); ++fi) {
    if (adj[fi][0] == -1)
      throw std::runtime_error("facet " + std::to_string(fi) +
                               ": no incident cell");
    if (adj[fi][0] != mesh.facets[fi].cells[0] ||
        adj[fi][1] != mesh.facets[fi].cells[1])
      throw std::runtime_error("facet " + std::to_string(fi) +
                               ": stored adjacency inconsistent");
  }
  return adj;
}

void export_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[64];
  out << "POINTS " << mesh.n_vertices() << "\n";
  for (const Point2& p : mesh.points) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e", p.x, p.y);
    out << buf << "\n";
  }
  out << "CELLS " << mesh.n_cells() << "\n";
  for (const Cell& c : mesh.cells)
    out << c.v[0] << "," << c.v[1] << "," << c.v[2] << ","
        << (c.region == Region::DesignRegion ? "DESIGN_REGION" : "FIXED_AIR")
        << "\n";
  out << "FACETS " << mesh.n_facets() << "\n";
  static const char* tag_names[] = {"INTERIOR",      "DIAPHRAGM",
                                    "OUTLET",        "SYMMETRY_NEUMANN",
                                    "FIXED_WALL",    "DESIGN_INTERFACE_DIRICHLET"};
  for (const Facet& f : mesh.facets)
    out << f.v[0] << "," << f.v[1] << ","
        << tag_names[static_cast<int>(f.tag)] << "\n";
}

}  // namespace cutplug
