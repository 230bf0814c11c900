#include "cutplug/shape_gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace cutplug {

namespace {

struct FieldAtPoint {
  Complex value{0.0, 0.0};
  Complex gx{0.0, 0.0}, gy{0.0, 0.0};
};

FieldAtPoint eval_field(const P2Basis& basis, const Complex* coeff) {
  FieldAtPoint f;
  for (int i = 0; i < 6; ++i) {
    f.value += coeff[i] * basis.N[i];
    f.gx += coeff[i] * basis.grad[i][0];
    f.gy += coeff[i] * basis.grad[i][1];
  }
  return f;
}

// psi(z, p; n) = alpha_T z p + alpha_V (grad z . grad p - (dz/dn)(dp/dn)).
Complex psi_value(const WentzellCoeffs& cf, const FieldAtPoint& z,
                  const FieldAtPoint& p, double nx, double ny) {
  const Complex dzn = nx * z.gx + ny * z.gy;
  const Complex dpn = nx * p.gx + ny * p.gy;
  return cf.alpha_T * z.value * p.value +
         cf.alpha_V * (z.gx * p.gx + z.gy * p.gy - dzn * dpn);
}

}  // namespace

Eigen::VectorXcd adjoint_rhs(const StateOperator& op) {
  return op.r_outlet.cast<Complex>();
}

DjTerms assemble_dj(const Mesh& mesh, const CutGeometry& cut,
                    const P2Space& space, const DesignPoisson& poisson,
                    const WentzellCoeffs& cf, const Eigen::VectorXcd& state,
                    const Eigen::VectorXcd& adjoint) {
  const int nf = poisson.n_free();
  DjTerms dj;
  dj.volume = Eigen::VectorXcd::Zero(nf);
  dj.tangential = Eigen::VectorXcd::Zero(nf);
  dj.normal_psi = Eigen::VectorXcd::Zero(nf);
  dj.point_jump = Eigen::VectorXcd::Zero(nf);
  const double k2 = cf.k * cf.k;
  const auto& seg_rule = seg_quadrature_3();

  for (const BoundarySegment& seg : cut.segments) {
    if (!(seg.length > 0.0)) continue;
    const CellFrame frame(mesh, seg.cell);
    const auto dofs = space.cell_dofs(mesh, seg.cell);
    Complex p_loc[6], z_loc[6];
    for (int i = 0; i < 6; ++i) {
      p_loc[i] = state[dofs[i]];
      z_loc[i] = adjoint[dofs[i]];
    }
    const double nx = seg.nx, ny = seg.ny;
    const double inv_gn = 1.0 / seg.grad_norm;

    // Constant P1 hat gradients and constant quadratic-field Hessians.
    const double lg[3][2] = {{-(frame.g1x + frame.g2x), -(frame.g1y + frame.g2y)},
                             {frame.g1x, frame.g1y},
                             {frame.g2x, frame.g2y}};
    const auto hess = frame.hessians();
    Complex Hp[3] = {0, 0, 0}, Hz[3] = {0, 0, 0};  // (xx, xy, yy)
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 3; ++c) {
        Hp[c] += p_loc[i] * hess[i][c];
        Hz[c] += z_loc[i] * hess[i][c];
      }

    const int verts[3] = {mesh.cells[seg.cell].v[0], mesh.cells[seg.cell].v[1],
                          mesh.cells[seg.cell].v[2]};
    int free_idx[3];
    double pt_grad_w[3][2];  // tangentially projected hat gradients
    for (int a = 0; a < 3; ++a) {
      free_idx[a] = poisson.free_index(verts[a]);
      const double gn = nx * lg[a][0] + ny * lg[a][1];
      pt_grad_w[a][0] = lg[a][0] - nx * gn;
      pt_grad_w[a][1] = lg[a][1] - ny * gn;
    }

    for (const SegQuadPoint& q : seg_rule) {
      Point2 pt{seg.a.x + q.s * (seg.b.x - seg.a.x),
                seg.a.y + q.s * (seg.b.y - seg.a.y)};
      const P2Basis basis = frame.eval(pt);
      const FieldAtPoint p = eval_field(basis, p_loc);
      const FieldAtPoint z = eval_field(basis, z_loc);
      const Complex dpn = nx * p.gx + ny * p.gy;
      const Complex dzn = nx * z.gx + ny * z.gy;
      const Complex tp_x = p.gx - nx * dpn, tp_y = p.gy - ny * dpn;
      const Complex tz_x = z.gx - nx * dzn, tz_y = z.gy - ny * dzn;
      const std::array<double, 3> bary = frame.barycentric(pt);
      const double w = q.w * seg.length;

      const Complex vol_density =
          z.gx * p.gx + z.gy * p.gy - k2 * z.value * p.value;
      // d(psi)/dn at frozen normal, with constant Hessians per cell:
      // alpha_T (dz/dn p + z dp/dn) + alpha_V (n.Hz.gradT(p) + n.Hp.gradT(z)).
      const Complex nHz_tp = nx * (Hz[0] * tp_x + Hz[1] * tp_y) +
                             ny * (Hz[1] * tp_x + Hz[2] * tp_y);
      const Complex nHp_tz = nx * (Hp[0] * tz_x + Hp[1] * tz_y) +
                             ny * (Hp[1] * tz_x + Hp[2] * tz_y);
      const Complex psi_n = cf.alpha_T * (dzn * p.value + z.value * dpn) +
                            cf.alpha_V * (nHz_tp + nHp_tz);

      for (int a = 0; a < 3; ++a) {
        const int fi = free_idx[a];
        if (fi < 0) continue;
        const double wl = bary[a];
        dj.volume[fi] += w * vol_density * wl * inv_gn;
        const Complex tw_gz = pt_grad_w[a][0] * z.gx + pt_grad_w[a][1] * z.gy;
        const Complex tw_gp = pt_grad_w[a][0] * p.gx + pt_grad_w[a][1] * p.gy;
        dj.tangential[fi] +=
            w * cf.alpha_V * (tw_gz * inv_gn * dpn + dzn * tw_gp * inv_gn);
        dj.normal_psi[fi] += w * psi_n * wl * inv_gn;
      }
    }
  }

  // Rim contributions: the boundary polyline crossing a mesh edge carries a
  // point term with the jump of psi times the conormals of the two incident
  // boundary facets (one-sided where the polyline leaves through the domain
  // boundary or a region interface).
  for (const CutPoint& cp : cut.cut_points) {
    if (cp.segment[0] < 0)
      throw std::runtime_error(
          "assemble_dj: cut point without incident boundary facet");
    const Facet& facet = mesh.facets[cp.facet];
    const Point2& e0 = mesh.points[facet.v[0]];
    const double elen = mesh.facet_length(cp.facet);
    const double t =
        std::hypot(cp.p.x - e0.x, cp.p.y - e0.y) / elen;  // edge parameter
    const double hat_w[2] = {1.0 - t, t};

    Complex flux_x{0.0, 0.0}, flux_y{0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      if (cp.segment[s] < 0) continue;
      const BoundarySegment& seg = cut.segments[cp.segment[s]];
      const CellFrame frame(mesh, seg.cell);
      const auto dofs = space.cell_dofs(mesh, seg.cell);
      Complex p_loc[6], z_loc[6];
      for (int i = 0; i < 6; ++i) {
        p_loc[i] = state[dofs[i]];
        z_loc[i] = adjoint[dofs[i]];
      }
      const P2Basis basis = frame.eval(cp.p);
      const FieldAtPoint p = eval_field(basis, p_loc);
      const FieldAtPoint z = eval_field(basis, z_loc);
      const Complex psi = psi_value(cf, z, p, seg.nx, seg.ny);
      flux_x += psi * cp.m[s][0];
      flux_y += psi * cp.m[s][1];
    }
    const Complex factor =
        (cp.nsx * flux_x + cp.nsy * flux_y) / cp.dphi_ds;
    for (int s = 0; s < 2; ++s) {
      const int fi = poisson.free_index(facet.v[s]);
      if (fi >= 0) dj.point_jump[fi] += hat_w[s] * factor;
    }
  }
  return dj;
}

Eigen::VectorXd objective_gradient(
    ObjectiveKind kind, const DesignPoisson& poisson,
    const std::vector<Eigen::VectorXcd>& dj_free_per_freq,
    const std::vector<Complex>& p_out, const std::vector<Complex>& p_ideal,
    double tik_eps, const DesignVector& phi_hat,
    const DesignVector& phi_hat_ref) {
  const int nf = poisson.n_free();
  if (dj_free_per_freq.size() != p_out.size())
    throw std::invalid_argument("objective_gradient: size mismatch");
  if (kind == ObjectiveKind::Track && p_ideal.size() != p_out.size())
    throw std::invalid_argument("objective_gradient: missing tracking target");

  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(nf);
  for (std::size_t i = 0; i < p_out.size(); ++i) {
    Complex weight;
    if (kind == ObjectiveKind::Track) {
      weight = std::conj(p_out[i] - p_ideal[i]);
    } else {
      const double a2 = std::norm(p_out[i]);
      if (!(a2 > 0.0))
        throw std::runtime_error(
            "objective_gradient: zero outlet pressure in power objective");
      weight = -std::conj(p_out[i]) / (a2 * a2);
    }
    acc += weight * dj_free_per_freq[i];
  }
  Eigen::VectorXd g = poisson.chain_to_design(Eigen::VectorXd(acc.real()));
  if (tik_eps > 0.0) g += tik_eps * (poisson.mass() * (phi_hat - phi_hat_ref));
  return g;
}

}  // namespace cutplug
