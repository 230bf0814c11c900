#include "cutplug/helmholtz.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cutplug {

namespace {

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "physics parameter " << name << " must be positive, got " << v;
    throw std::invalid_argument(os.str());
  }
}

void validate(const PhysicsParams& p) {
  check_positive(p.c0, "c0");
  check_positive(p.rho0, "rho0");
  check_positive(p.nu, "nu");
  check_positive(p.prandtl, "prandtl");
  check_positive(p.cp, "cp");
  check_positive(p.gamma, "gamma");
}

// Symmetric triplet sink: every off-diagonal contribution is pushed as the
// (i,j)/(j,i) pair from one double, so the assembled matrix is bitwise
// symmetric regardless of summation order.
struct SymAcc {
  std::vector<Eigen::Triplet<double>> t;
  void add(int i, int j, double v) {
    t.emplace_back(i, j, v);
    if (i != j) t.emplace_back(j, i, v);
  }
  void add_upper(const int* dofs, int n, const double* local) {
    // Pair emission keys on the *local* indices: two distinct local basis
    // functions may share a global dof (facet-coupled blocks), and their
    // (a,b)/(b,a) contributions must both land even when dofs coincide.
    for (int a = 0; a < n; ++a) {
      t.emplace_back(dofs[a], dofs[a], local[a * n + a]);
      for (int b = a + 1; b < n; ++b) {
        const double v = local[a * n + b];
        t.emplace_back(dofs[a], dofs[b], v);
        t.emplace_back(dofs[b], dofs[a], v);
      }
    }
  }
  SpMatD build(int n) const {
    SpMatD m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
  }
};

// Accumulates stiffness and mass over one set of quadrature points of a cell.
void volume_at_point(const CellFrame& frame, const Point2& pt, double w,
                     double* s_loc, double* m_loc) {
  const P2Basis basis = frame.eval(pt);
  for (int a = 0; a < 6; ++a) {
    for (int b = a; b < 6; ++b) {
      s_loc[a * 6 + b] += w * (basis.grad[a][0] * basis.grad[b][0] +
                               basis.grad[a][1] * basis.grad[b][1]);
      m_loc[a * 6 + b] += w * basis.N[a] * basis.N[b];
    }
  }
}

double polygon_fan_assemble(const CellFrame& frame,
                            const std::vector<Point2>& poly, double* s_loc,
                            double* m_loc) {
  Point2 c{0.0, 0.0};
  for (const Point2& p : poly) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(poly.size());
  c.y /= static_cast<double>(poly.size());
  const auto& rule = tri_quadrature_6();
  double area_sum = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t e = 0; e < n; ++e) {
    const Point2& p1 = poly[e];
    const Point2& p2 = poly[(e + 1) % n];
    const double area =
        0.5 * ((p1.x - c.x) * (p2.y - c.y) - (p2.x - c.x) * (p1.y - c.y));
    if (!(area > 0.0)) continue;  // degenerate sliver edge of the fan
    area_sum += area;
    for (const TriQuadPoint& q : rule) {
      Point2 pt{q.l0 * c.x + q.l1 * p1.x + q.l2 * p2.x,
                q.l0 * c.y + q.l1 * p1.y + q.l2 * p2.y};
      volume_at_point(frame, pt, q.w * area, s_loc, m_loc);
    }
  }
  return area_sum;
}

// 1D quadratic trace shapes on a facet parameterized by s in [0,1]
// (nodes: endpoint 0, endpoint 1, midpoint).
void trace_shapes(double s, double N[3], double dNds[3]) {
  N[0] = (1.0 - s) * (1.0 - 2.0 * s);
  N[1] = s * (2.0 * s - 1.0);
  N[2] = 4.0 * s * (1.0 - s);
  dNds[0] = 4.0 * s - 3.0;
  dNds[1] = 4.0 * s - 1.0;
  dNds[2] = 4.0 - 8.0 * s;
}

}  // namespace

BoundaryLayerThicknesses boundary_layer_thicknesses(const PhysicsParams& p,
                                                    double omega) {
  validate(p);
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!p.losses) return {0.0, 0.0};
  BoundaryLayerThicknesses d;
  d.delta_V = std::sqrt(2.0 * p.nu / omega);
  const double lambda = p.cp * (p.rho0 * p.nu) / p.prandtl;  // heat conduction
  d.delta_T = std::sqrt(2.0 * lambda / (omega * p.rho0 * p.cp));
  return d;
}

WentzellCoeffs wentzell_coeffs(const PhysicsParams& p, double omega) {
  const BoundaryLayerThicknesses d = boundary_layer_thicknesses(p, omega);
  WentzellCoeffs cf;
  cf.k = omega / p.c0;
  cf.delta_V = d.delta_V;
  cf.delta_T = d.delta_T;
  const Complex i_minus_1{-1.0, 1.0};
  cf.alpha_T = cf.delta_T * cf.k * cf.k * i_minus_1 * (p.gamma - 1.0) * 0.5;
  cf.alpha_V = cf.delta_V * i_minus_1 * 0.5;
  return cf;
}

std::vector<bool> active_dof_mask(const Mesh& mesh, const CutGeometry& cut,
                                  const P2Space& space) {
  auto covered = [&](int cell) { return cut.status[cell] != CellStatus::Outside; };
  std::vector<bool> active(space.n_dofs, false);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    for (int c : mesh.vertex_cells[v])
      if (covered(c)) {
        active[space.vertex_dof(v)] = true;
        break;
      }
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    if (covered(facet.cells[0]) ||
        (facet.cells[1] >= 0 && covered(facet.cells[1])))
      active[space.facet_dof(f)] = true;
  }
  return active;
}

StateOperator assemble_operator(const Mesh& mesh, const CutGeometry& cut,
                                const P2Space& space,
                                const PhysicsParams& phys) {
  validate(phys);
  StateOperator op;
  op.n_dofs = space.n_dofs;
  op.active = active_dof_mask(mesh, cut, space);
  if (std::find(op.active.begin(), op.active.end(), true) == op.active.end())
    throw std::runtime_error("assemble_operator: empty active DOF set");

  SymAcc acc_S, acc_M, acc_B, acc_Mw, acc_Kw, acc_G;
  op.b_dir = Eigen::VectorXd::Zero(space.n_dofs);
  op.r_outlet = Eigen::VectorXd::Zero(space.n_dofs);

  const auto& tri_rule = tri_quadrature_6();
  const auto& seg_rule = seg_quadrature_3();

  // Volume terms: full cells by the reference rule, cut cells by a centroid
  // fan over the inside polygon.
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (cut.status[c] == CellStatus::Outside) continue;
    const CellFrame frame(mesh, c);
    const auto dofs = space.cell_dofs(mesh, c);
    double s_loc[36] = {0.0};
    double m_loc[36] = {0.0};
    if (cut.status[c] == CellStatus::Inside) {
      for (const TriQuadPoint& q : tri_rule) {
        Point2 pt{q.l0 * frame.p[0].x + q.l1 * frame.p[1].x +
                      q.l2 * frame.p[2].x,
                  q.l0 * frame.p[0].y + q.l1 * frame.p[1].y +
                      q.l2 * frame.p[2].y};
        volume_at_point(frame, pt, q.w * frame.area, s_loc, m_loc);
      }
    } else {
      const int seg = cut.cell_segment[c];
      if (seg < 0)
        throw std::runtime_error("assemble_operator: cut cell without polygon");
      polygon_fan_assemble(frame, cut.inside_polygons[seg], s_loc, m_loc);
    }
    acc_S.add_upper(dofs.data(), 6, s_loc);
    acc_M.add_upper(dofs.data(), 6, m_loc);
  }

  // Mesh-facet boundary terms through the 1D trace of the quadratic space:
  // outlet mass + averaging weights, and the lossy wall (diaphragm and the
  // chamber/design interface wall) mass + tangential stiffness + load.
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    const bool is_outlet = facet.tag == FacetTag::Outlet;
    const bool is_wall = facet.tag == FacetTag::Diaphragm ||
                         facet.tag == FacetTag::DesignInterfaceDirichlet;
    if (!is_outlet && !is_wall) continue;
    const Point2& a = mesh.points[facet.v[0]];
    const Point2& b = mesh.points[facet.v[1]];
    const double len = mesh.facet_length(f);
    if (!(len > 0.0)) throw std::runtime_error("degenerate boundary facet");
    // Outward normal x-component of the cell the facet is oriented with.
    const double nx = (b.y - a.y) / len;
    const auto dofs = space.facet_trace_dofs(mesh, f);
    double mass_loc[9] = {0.0};
    double stiff_loc[9] = {0.0};
    double load_loc[3] = {0.0};
    for (const SegQuadPoint& q : seg_rule) {
      double N[3], dNds[3];
      trace_shapes(q.s, N, dNds);
      const double w = q.w * len;
      for (int i = 0; i < 3; ++i) {
        load_loc[i] += w * N[i];
        for (int j = i; j < 3; ++j) {
          mass_loc[i * 3 + j] += w * N[i] * N[j];
          stiff_loc[i * 3 + j] += q.w / len * dNds[i] * dNds[j];
        }
      }
    }
    if (is_outlet) {
      acc_B.add_upper(dofs.data(), 3, mass_loc);
      for (int i = 0; i < 3; ++i) op.r_outlet[dofs[i]] += load_loc[i];
      op.outlet_length += len;
    } else {
      acc_Mw.add_upper(dofs.data(), 3, mass_loc);
      acc_Kw.add_upper(dofs.data(), 3, stiff_loc);
      if (facet.tag == FacetTag::Diaphragm) {
        const double n_dot_ea = nx;  // e_a = (1, 0)
        for (int i = 0; i < 3; ++i)
          op.b_dir[dofs[i]] += phys.rho0 * n_dot_ea * load_loc[i];
      }
    }
  }
  if (!(op.outlet_length > 0.0))
    throw std::invalid_argument("assemble_operator: mesh has no outlet facets");
  op.r_outlet /= op.outlet_length;

  // Cut-boundary wall terms through the cell basis with tangential projection.
  for (const BoundarySegment& seg : cut.segments) {
    const CellFrame frame(mesh, seg.cell);
    const auto dofs = space.cell_dofs(mesh, seg.cell);
    const double len = seg.length;
    if (!(len > 0.0)) continue;
    const double tx = (seg.b.x - seg.a.x) / len;
    const double ty = (seg.b.y - seg.a.y) / len;
    double mass_loc[36] = {0.0};
    double stiff_loc[36] = {0.0};
    for (const SegQuadPoint& q : seg_rule) {
      Point2 pt{seg.a.x + q.s * (seg.b.x - seg.a.x),
                seg.a.y + q.s * (seg.b.y - seg.a.y)};
      const P2Basis basis = frame.eval(pt);
      const double w = q.w * len;
      double tgrad[6];
      for (int i = 0; i < 6; ++i)
        tgrad[i] = tx * basis.grad[i][0] + ty * basis.grad[i][1];
      for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
          mass_loc[i * 6 + j] += w * basis.N[i] * basis.N[j];
          stiff_loc[i * 6 + j] += w * tgrad[i] * tgrad[j];
        }
      }
    }
    acc_Mw.add_upper(dofs.data(), 6, mass_loc);
    acc_Kw.add_upper(dofs.data(), 6, stiff_loc);
  }

  // Ghost penalty: interior facets with a cut neighbor and no outside
  // neighbor; weight h^3 with h the larger adjacent cell diameter.
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    if (facet.cells[1] < 0) continue;
    const CellStatus s0 = cut.status[facet.cells[0]];
    const CellStatus s1 = cut.status[facet.cells[1]];
    const bool any_cut = s0 == CellStatus::Cut || s1 == CellStatus::Cut;
    const bool any_out = s0 == CellStatus::Outside || s1 == CellStatus::Outside;
    if (!any_cut || any_out) continue;
    const Point2& a = mesh.points[facet.v[0]];
    const Point2& b = mesh.points[facet.v[1]];
    const double len = mesh.facet_length(f);
    const double nx = (b.y - a.y) / len;
    const double ny = -(b.x - a.x) / len;
    const double h = std::max(mesh.cells[facet.cells[0]].diameter,
                              mesh.cells[facet.cells[1]].diameter);
    const double h3 = h * h * h;
    const CellFrame frame0(mesh, facet.cells[0]);
    const CellFrame frame1(mesh, facet.cells[1]);
    const auto dofs0 = space.cell_dofs(mesh, facet.cells[0]);
    const auto dofs1 = space.cell_dofs(mesh, facet.cells[1]);
    int dofs[12];
    for (int i = 0; i < 6; ++i) {
      dofs[i] = dofs0[i];
      dofs[6 + i] = dofs1[i];
    }
    double g_loc[144] = {0.0};
    for (const SegQuadPoint& q : seg_rule) {
      Point2 pt{a.x + q.s * (b.x - a.x), a.y + q.s * (b.y - a.y)};
      const P2Basis b0 = frame0.eval(pt);
      const P2Basis b1 = frame1.eval(pt);
      double jump[12];
      for (int i = 0; i < 6; ++i) {
        jump[i] = nx * b0.grad[i][0] + ny * b0.grad[i][1];
        jump[6 + i] = -(nx * b1.grad[i][0] + ny * b1.grad[i][1]);
      }
      const double w = q.w * len * h3;
      for (int i = 0; i < 12; ++i)
        for (int j = i; j < 12; ++j) g_loc[i * 12 + j] += w * jump[i] * jump[j];
    }
    acc_G.add_upper(dofs, 12, g_loc);
  }

  op.S = acc_S.build(space.n_dofs);
  op.M = acc_M.build(space.n_dofs);
  op.B_out = acc_B.build(space.n_dofs);
  op.M_w = acc_Mw.build(space.n_dofs);
  op.K_w = acc_Kw.build(space.n_dofs);
  op.G = acc_G.build(space.n_dofs);
  return op;
}

void combine_system(const StateOperator& op, const WentzellCoeffs& cf,
                    double eps_s, double a_d, SpMatC& A, Eigen::VectorXcd& b) {
  const double k = cf.k;
  SpMatD real_part = op.S - (k * k) * op.M + eps_s * op.G;
  A = real_part.cast<Complex>();
  A += Complex(0.0, k) * op.B_out.cast<Complex>();
  A += cf.alpha_T * op.M_w.cast<Complex>();
  A += cf.alpha_V * op.K_w.cast<Complex>();
  std::vector<Eigen::Triplet<Complex>> pin;
  for (int i = 0; i < op.n_dofs; ++i)
    if (!op.active[i]) pin.emplace_back(i, i, Complex(1.0, 0.0));
  if (!pin.empty()) {
    SpMatC D(op.n_dofs, op.n_dofs);
    D.setFromTriplets(pin.begin(), pin.end());
    A += D;
  }
  A.makeCompressed();
  b = (a_d * op.b_dir).cast<Complex>();
}

void assemble_state(const Mesh& mesh, const CutGeometry& cut,
                    const P2Space& space, const WentzellCoeffs& cf,
                    const PhysicsParams& phys, double eps_s, SpMatC& A,
                    Eigen::VectorXcd& b) {
  const StateOperator op = assemble_operator(mesh, cut, space, phys);
  combine_system(op, cf, eps_s, phys.a_d, A, b);
}

struct FrequencySolver::Impl {
  Eigen::SparseLU<SpMatC> lu;
  SpMatC A;
  bool ready = false;
};

FrequencySolver::FrequencySolver() : impl_(std::make_unique<Impl>()) {}
FrequencySolver::~FrequencySolver() = default;
FrequencySolver::FrequencySolver(FrequencySolver&&) noexcept = default;
FrequencySolver& FrequencySolver::operator=(FrequencySolver&&) noexcept =
    default;

void FrequencySolver::factorize(const SpMatC& A) {
  // Eigen's sparse LU does not terminate cleanly on a structurally empty
  // matrix, so reject obviously singular inputs before handing it over.
  if (A.rows() == 0 || A.rows() != A.cols() || A.nonZeros() < A.rows())
    throw std::runtime_error("frequency solve: sparse LU factorization failed");
  impl_->A = A;
  impl_->lu.compute(A);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("frequency solve: sparse LU factorization failed");
  impl_->ready = true;
}

Eigen::VectorXcd FrequencySolver::solve(const Eigen::VectorXcd& rhs) const {
  if (!impl_->ready)
    throw std::runtime_error("frequency solve: factorize() not called");
  const double rhs_norm = rhs.norm();
  Eigen::VectorXcd x = impl_->lu.solve(rhs);
  if (rhs_norm == 0.0) {
    last_residual_ = 0.0;
    return Eigen::VectorXcd::Zero(rhs.size());
  }
  double rel = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::VectorXcd r = rhs - impl_->A * x;
    rel = r.norm() / rhs_norm;
    if (rel < 1e-10) break;
    x += impl_->lu.solve(r);
  }
  last_residual_ = rel;
  if (!(rel < 1e-10)) {
    std::ostringstream os;
    os << "frequency solve: residual " << rel
       << " exceeds 1e-10 after iterative refinement";
    throw std::runtime_error(os.str());
  }
  return x;
}

Complex outlet_pressure(const StateOperator& op, const Eigen::VectorXcd& p) {
  Complex out{0.0, 0.0};
  for (int i = 0; i < op.n_dofs; ++i) out += op.r_outlet[i] * p[i];
  return out;
}

double power_balance_residual(const StateOperator& op,
                              const WentzellCoeffs& cf,
                              const PhysicsParams& phys, double a_d,
                              const Eigen::VectorXcd& p) {
  const double k = cf.k;
  const double out_term = k * (p.adjoint() * (op.B_out * p)).value().real();
  const double thermal = cf.delta_T * k * k * (phys.gamma - 1.0) * 0.5 *
                         (p.adjoint() * (op.M_w * p)).value().real();
  const double viscous =
      cf.delta_V * 0.5 * (p.adjoint() * (op.K_w * p)).value().real();
  const Eigen::VectorXcd b = (a_d * op.b_dir).cast<Complex>();
  const double input = p.dot(b).imag();  // Im(conj(p) . b)
  const double denom = std::max(std::abs(input), 1e-300);
  return std::abs(out_term + thermal + viscous - input) / denom;
}

}  // namespace cutplug
