#include "cutplug/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cutplug/quadrature.hpp"

namespace cutplug {

namespace {

// P1 hat gradients and area of one cell.
struct P1Frame {
  std::array<double, 3> gx, gy;
  double area;
  explicit P1Frame(const Mesh& mesh, int cell) {
    const CellFrame f(mesh, cell);
    area = f.area;
    gx = {-(f.g1x + f.g2x), f.g1x, f.g2x};
    gy = {-(f.g1y + f.g2y), f.g1y, f.g2y};
  }
};

template <typename Solver, typename Mat>
Eigen::VectorXd solve_refined(const Solver& solver, const Mat& A,
                              const Eigen::VectorXd& rhs, const char* what) {
  Eigen::VectorXd x = solver.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd r = rhs - A * x;
    if (r.norm() / scale < 1e-13) break;
    x += solver.solve(r);
  }
  if (((rhs - A * x).norm() / scale) > 1e-12)
    throw std::runtime_error(std::string(what) + ": residual above 1e-12");
  return x;
}

}  // namespace

DesignPoisson::DesignPoisson(
    const Mesh& mesh, const std::unordered_map<int, double>& dirichlet_data,
    bool custom_dirichlet)
    : mesh_(mesh) {
  std::vector<char> is_design(mesh.n_vertices(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].region == Region::DesignRegion)
      for (int v : mesh.cells[c].v) is_design[v] = 1;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (is_design[v]) design_vertices_.push_back(v);
  if (design_vertices_.empty())
    throw std::invalid_argument("design Poisson: mesh has no design region");

  std::set<int> expected;
  for (int fi = 0; fi < mesh.n_facets(); ++fi)
    if (mesh.facets[fi].tag == FacetTag::DesignInterfaceDirichlet) {
      expected.insert(mesh.facets[fi].v[0]);
      expected.insert(mesh.facets[fi].v[1]);
    }
  std::set<int> given;
  for (const auto& [v, val] : dirichlet_data) {
    if (!is_design[v])
      throw std::invalid_argument(
          "design Poisson: Dirichlet datum on non-design vertex " +
          std::to_string(v));
    given.insert(v);
    dirichlet_.emplace_back(v, val);
  }
  if (!custom_dirichlet && given != expected)
    throw std::invalid_argument(
        "design Poisson: Dirichlet data must cover exactly the "
        "DESIGN_INTERFACE_DIRICHLET vertex set");
  if (given.empty())
    throw std::invalid_argument(
        "design Poisson: empty Dirichlet set leaves the operator singular");
  std::sort(dirichlet_.begin(), dirichlet_.end());

  free_index_.assign(mesh.n_vertices(), -1);
  for (int v : design_vertices_)
    if (!given.count(v)) {
      free_index_[v] = static_cast<int>(free_vertices_.size());
      free_vertices_.push_back(v);
    }
  if (free_vertices_.empty())
    throw std::invalid_argument("design Poisson: no free design vertices");

  std::vector<double> dir_value(mesh.n_vertices(), 0.0);
  for (const auto& [v, val] : dirichlet_) dir_value[v] = val;

  const int nf = n_free();
  std::vector<Eigen::Triplet<double>> kt, mt;
  lift_ = Eigen::VectorXd::Zero(nf);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cells[c].region != Region::DesignRegion) continue;
    const P1Frame fr(mesh, c);
    const auto& v = mesh.cells[c].v;
    for (int a = 0; a < 3; ++a) {
      const int ia = free_index_[v[a]];
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const double kab =
            (fr.gx[a] * fr.gx[b] + fr.gy[a] * fr.gy[b]) * fr.area;
        const double mab = fr.area * ((a == b) ? 1.0 / 6.0 : 1.0 / 12.0);
        const int ib = free_index_[v[b]];
        if (ib >= 0) {
          kt.emplace_back(ia, ib, kab);
          mt.emplace_back(ia, ib, mab);
        } else if (given.count(v[b])) {
          lift_(ia) += kab * dir_value[v[b]];
        }
      }
    }
  }
  K_ff_.resize(nf, nf);
  K_ff_.setFromTriplets(kt.begin(), kt.end());
  M_ff_.resize(nf, nf);
  M_ff_.setFromTriplets(mt.begin(), mt.end());
  ldlt_.compute(K_ff_);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("design Poisson: stiffness factorization failed");
}

int DesignPoisson::free_index(int vertex) const {
  if (vertex < 0 || vertex >= static_cast<int>(free_index_.size())) return -1;
  return free_index_[vertex];
}

LevelSetField DesignPoisson::solve(const DesignVector& phi_hat) const {
  if (phi_hat.size() != n_free())
    throw std::invalid_argument("design Poisson: design vector size mismatch");
  const Eigen::VectorXd rhs = M_ff_ * phi_hat - lift_;
  const Eigen::VectorXd x = solve_refined(ldlt_, K_ff_, rhs, "design Poisson");
  LevelSetField phi;
  phi.values.assign(mesh_.n_vertices(), 0.0);
  for (int i = 0; i < n_free(); ++i) phi.values[free_vertices_[i]] = x(i);
  for (const auto& [v, val] : dirichlet_) phi.values[v] = val;
  return phi;
}

DesignVector DesignPoisson::source_for(
    const std::vector<double>& nodal_phi) const {
  if (nodal_phi.size() != static_cast<size_t>(mesh_.n_vertices()))
    throw std::invalid_argument("source_for: nodal field size mismatch");
  Eigen::VectorXd phi_f(n_free());
  for (int i = 0; i < n_free(); ++i) phi_f(i) = nodal_phi[free_vertices_[i]];
  const Eigen::VectorXd rhs = K_ff_ * phi_f + lift_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_ldlt(M_ff_);
  if (mass_ldlt.info() != Eigen::Success)
    throw std::runtime_error("source_for: mass factorization failed");
  return solve_refined(mass_ldlt, M_ff_, rhs, "source_for");
}

Eigen::VectorXd DesignPoisson::chain_to_design(
    const Eigen::VectorXd& dj_free) const {
  if (dj_free.size() != n_free())
    throw std::invalid_argument("chain_to_design: size mismatch");
  return M_ff_ * solve_refined(ldlt_, K_ff_, dj_free, "chain_to_design");
}

Eigen::VectorXcd DesignPoisson::chain_to_design(
    const Eigen::VectorXcd& dj_free) const {
  const Eigen::VectorXd re = chain_to_design(Eigen::VectorXd(dj_free.real()));
  const Eigen::VectorXd im = chain_to_design(Eigen::VectorXd(dj_free.imag()));
  Eigen::VectorXcd out = re.cast<std::complex<double>>();
  out += std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
  return out;
}

double CutGeometry::inside_area(const Mesh& mesh) const {
  double area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cells[c].region != Region::DesignRegion) continue;
    if (status[c] == CellStatus::Inside) area += mesh.cell_area(c);
  }
  for (const auto& poly : inside_polygons) {
    double a = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
      const Point2& p = poly[i];
      const Point2& q = poly[(i + 1) % poly.size()];
      a += p.x * q.y - q.x * p.y;
    }
    area += 0.5 * a;
  }
  return area;
}

CutGeometry classify_and_cut(const Mesh& mesh, LevelSetField& phi) {
  if (phi.values.size() != static_cast<size_t>(mesh.n_vertices()))
    throw std::invalid_argument("classify: level-set size mismatch");

  std::vector<char> is_design(mesh.n_vertices(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].region == Region::DesignRegion)
      for (int v : mesh.cells[c].v) is_design[v] = 1;

  double scale = 0.0;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (is_design[v]) scale = std::max(scale, std::abs(phi.values[v]));
  scale = std::max(scale, 1e-9);
  const double floor = 1e-12 * scale;
  phi.n_perturbed = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (is_design[v] && std::abs(phi.values[v]) < floor) {
      phi.values[v] = floor;
      ++phi.n_perturbed;
    }

  CutGeometry cut;
  cut.status.assign(mesh.n_cells(), CellStatus::Inside);
  cut.cell_segment.assign(mesh.n_cells(), -1);

  // Edge crossings are computed once per facet in its stored orientation so
  // both incident cells see bitwise-identical points.
  struct Crossing {
    Point2 p;
    double t;
  };
  std::vector<int> crossing_of(mesh.n_facets(), -1);
  std::vector<Crossing> crossings;
  std::vector<int> crossing_facet;

  auto facet_crossing = [&](int fi) -> int {
    if (crossing_of[fi] != -1) return crossing_of[fi];
    const Facet& f = mesh.facets[fi];
    const double p0 = phi.values[f.v[0]], p1 = phi.values[f.v[1]];
    const double t = p0 / (p0 - p1);
    const Point2 a = mesh.points[f.v[0]], b = mesh.points[f.v[1]];
    crossing_of[fi] = static_cast<int>(crossings.size());
    crossings.push_back({{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, t});
    crossing_facet.push_back(fi);
    return crossing_of[fi];
  };

  std::vector<std::array<int, 2>> segment_crossings;  // per segment
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cells[c].region != Region::DesignRegion) continue;
    const auto& v = mesh.cells[c].v;
    const double f0 = phi.values[v[0]], f1 = phi.values[v[1]],
                 f2 = phi.values[v[2]];
    if (f0 < 0 && f1 < 0 && f2 < 0) {
      cut.status[c] = CellStatus::Inside;
      continue;
    }
    if (f0 > 0 && f1 > 0 && f2 > 0) {
      cut.status[c] = CellStatus::Outside;
      continue;
    }
    cut.status[c] = CellStatus::Cut;

    const double fv[3] = {f0, f1, f2};
    std::array<int, 2> crossed{-1, -1};
    int nc = 0;
    std::vector<Point2> poly;
    for (int e = 0; e < 3; ++e) {
      if (fv[e] < 0) poly.push_back(mesh.points[v[e]]);
      if (fv[e] * fv[(e + 1) % 3] < 0) {
        const int fi = mesh.cells[c].facets[e];
        if (nc >= 2) throw std::runtime_error("classify: more than two crossings");
        crossed[nc++] = fi;
        poly.push_back(crossings[facet_crossing(fi)].p);
      }
    }
    if (nc != 2) throw std::runtime_error("classify: cut cell without two crossings");

    const P1Frame fr(mesh, c);
    BoundarySegment seg;
    seg.cell = c;
    seg.a = crossings[crossing_of[crossed[0]]].p;
    seg.b = crossings[crossing_of[crossed[1]]].p;
    seg.length = std::hypot(seg.b.x - seg.a.x, seg.b.y - seg.a.y);
    double gx = 0, gy = 0;
    for (int a = 0; a < 3; ++a) {
      gx += fv[a] * fr.gx[a];
      gy += fv[a] * fr.gy[a];
    }
    seg.grad_norm = std::hypot(gx, gy);
    if (seg.grad_norm == 0.0)
      throw std::runtime_error("classify: vanishing level-set gradient");
    seg.nx = gx / seg.grad_norm;
    seg.ny = gy / seg.grad_norm;
    cut.cell_segment[c] = static_cast<int>(cut.segments.size());
    cut.segments.push_back(seg);
    cut.inside_polygons.push_back(std::move(poly));
    segment_crossings.push_back(crossed);
  }

  // One cut point per crossed facet; incident cut segments attach a conormal
  // pointing away from themselves (towards the far side of the crossing).
  for (size_t ci = 0; ci < crossings.size(); ++ci) {
    const int fi = crossing_facet[ci];
    const Facet& f = mesh.facets[fi];
    CutPoint cp;
    cp.facet = fi;
    cp.p = crossings[ci].p;
    const Point2 a = mesh.points[f.v[0]], b = mesh.points[f.v[1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double dphi = phi.values[f.v[1]] - phi.values[f.v[0]];
    const double sgn = (dphi > 0) ? 1.0 : -1.0;
    cp.nsx = sgn * (b.x - a.x) / len;
    cp.nsy = sgn * (b.y - a.y) / len;
    cp.dphi_ds = std::abs(dphi) / len;
    int slot = 0;
    for (int side = 0; side < 2; ++side) {
      const int cell = f.cells[side];
      if (cell == -1 || cut.cell_segment[cell] < 0) continue;
      const int si = cut.cell_segment[cell];
      const auto& sc = segment_crossings[si];
      if (sc[0] != fi && sc[1] != fi) continue;  // cut cell, other edges crossed
      const Point2 other =
          (sc[0] == fi) ? crossings[crossing_of[sc[1]]].p
                        : crossings[crossing_of[sc[0]]].p;
      double mx = cp.p.x - other.x, my = cp.p.y - other.y;
      const double mlen = std::hypot(mx, my);
      if (mlen == 0.0) throw std::runtime_error("classify: degenerate cut segment");
      cp.segment[slot] = si;
      cp.m[slot] = {mx / mlen, my / mlen};
      ++slot;
    }
    if (slot == 0) continue;  // crossing cached but cell turned out untouched
    cut.cut_points.push_back(cp);
  }
  return cut;
}

LevelSetField perturb_levelset(const LevelSetField& phi,
                               const std::vector<double>& w, double t) {
  if (w.size() != phi.values.size())
    throw std::invalid_argument("perturb: size mismatch");
  LevelSetField out = phi;
  out.n_perturbed = 0;
  for (size_t i = 0; i < w.size(); ++i) out.values[i] += t * w[i];
  return out;
}

void export_levelset(const Mesh& mesh, const LevelSetField& phi,
                     std::ostream& out) {
  std::vector<char> is_design(mesh.n_vertices(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].region == Region::DesignRegion)
      for (int v : mesh.cells[c].v) is_design[v] = 1;
  char buf[96];
  out << "x,y,phi\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!is_design[v]) continue;
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e", mesh.points[v].x,
                  mesh.points[v].y, phi.values[v]);
    out << buf << "\n";
  }
}

void export_boundary_polyline(const CutGeometry& cut, std::ostream& out) {
  char buf[160];
  out << "x0,y0,x1,y1\n";
  for (const BoundarySegment& s : cut.segments) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e", s.a.x, s.a.y,
                  s.b.x, s.b.y);
    out << buf << "\n";
  }
}

}  // namespace cutplug
