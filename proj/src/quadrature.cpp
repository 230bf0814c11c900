#include "cutplug/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cutplug {

const std::array<TriQuadPoint, 6>& tri_quadrature_6() {
  // Degree-4 rule: two orbits of three points, weights normalized to 1.
  static const double a1 = 0.445948490915965;
  static const double w1 = 0.223381589678011;
  static const double a2 = 0.091576213509771;
  static const double w2 = 0.109951743655322;
  static const std::array<TriQuadPoint, 6> rule = {{
      {1.0 - 2.0 * a1, a1, a1, w1},
      {a1, 1.0 - 2.0 * a1, a1, w1},
      {a1, a1, 1.0 - 2.0 * a1, w1},
      {1.0 - 2.0 * a2, a2, a2, w2},
      {a2, 1.0 - 2.0 * a2, a2, w2},
      {a2, a2, 1.0 - 2.0 * a2, w2},
  }};
  return rule;
}

const std::array<SegQuadPoint, 3>& seg_quadrature_3() {
  static const double r = std::sqrt(3.0 / 5.0);
  static const std::array<SegQuadPoint, 3> rule = {{
      {0.5 * (1.0 - r), 5.0 / 18.0},
      {0.5, 8.0 / 18.0},
      {0.5 * (1.0 + r), 5.0 / 18.0},
  }};
  return rule;
}

CellFrame::CellFrame(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cells[cell];
  for (int i = 0; i < 3; ++i) p[i] = mesh.points[c.v[i]];
  const double ax = p[1].x - p[0].x, ay = p[1].y - p[0].y;
  const double bx = p[2].x - p[0].x, by = p[2].y - p[0].y;
  const double det = ax * by - ay * bx;
  if (det <= 0.0) throw std::runtime_error("cell with non-positive area");
  area = 0.5 * det;
  g1x = by / det;
  g1y = -bx / det;
  g2x = -ay / det;
  g2y = ax / det;
}

std::array<double, 3> CellFrame::barycentric(const Point2& q) const {
  const double dx = q.x - p[0].x, dy = q.y - p[0].y;
  const double l1 = g1x * dx + g1y * dy;
  const double l2 = g2x * dx + g2y * dy;
  return {1.0 - l1 - l2, l1, l2};
}

P2Basis CellFrame::eval(const Point2& q) const {
  const auto lam = barycentric(q);
  const double l0 = lam[0], l1 = lam[1], l2 = lam[2];
  const double g0x = -(g1x + g2x), g0y = -(g1y + g2y);
  P2Basis b;
  b.N = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
         4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
  b.grad[0] = {(4 * l0 - 1) * g0x, (4 * l0 - 1) * g0y};
  b.grad[1] = {(4 * l1 - 1) * g1x, (4 * l1 - 1) * g1y};
  b.grad[2] = {(4 * l2 - 1) * g2x, (4 * l2 - 1) * g2y};
  b.grad[3] = {4 * (l0 * g1x + l1 * g0x), 4 * (l0 * g1y + l1 * g0y)};
  b.grad[4] = {4 * (l1 * g2x + l2 * g1x), 4 * (l1 * g2y + l2 * g1y)};
  b.grad[5] = {4 * (l2 * g0x + l0 * g2x), 4 * (l2 * g0y + l0 * g2y)};
  return b;
}

std::array<std::array<double, 3>, 6> CellFrame::hessians() const {
  const double g0x = -(g1x + g2x), g0y = -(g1y + g2y);
  const double gx[3] = {g0x, g1x, g2x};
  const double gy[3] = {g0y, g1y, g2y};
  auto sq = [&](int a) -> std::array<double, 3> {
    return {4 * gx[a] * gx[a], 4 * gx[a] * gy[a], 4 * gy[a] * gy[a]};
  };
  auto mix = [&](int a, int b) -> std::array<double, 3> {
    return {8 * gx[a] * gx[b], 4 * (gx[a] * gy[b] + gx[b] * gy[a]),
            8 * gy[a] * gy[b]};
  };
  return {sq(0), sq(1), sq(2), mix(0, 1), mix(1, 2), mix(2, 0)};
}

P2Space P2Space::build(const Mesh& mesh) {
  P2Space s;
  s.n_vertex_dofs = mesh.n_vertices();
  s.n_dofs = mesh.n_vertices() + mesh.n_facets();
  s.active.assign(s.n_dofs, true);
  return s;
}

std::array<int, 6> P2Space::cell_dofs(const Mesh& mesh, int cell) const {
  const Cell& c = mesh.cells[cell];
  return {c.v[0],
          c.v[1],
          c.v[2],
          n_vertex_dofs + c.facets[0],
          n_vertex_dofs + c.facets[1],
          n_vertex_dofs + c.facets[2]};
}

std::array<int, 3> P2Space::facet_trace_dofs(const Mesh& mesh,
                                             int facet) const {
  const Facet& f = mesh.facets[facet];
  return {f.v[0], f.v[1], n_vertex_dofs + facet};
}

}  // namespace cutplug
