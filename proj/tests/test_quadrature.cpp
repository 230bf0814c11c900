#include <cmath>
#include <random>

#include "cutplug/quadrature.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace cutplug;

namespace {

Mesh unit_square() { return build_rect_mesh(0.0, 0.0, 1.0, 1.0, 1.0); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("triangle rule integrates monomials to degree 4") {
    const auto& rule = tri_quadrature_6();
    double wsum = 0.0;
    for (const auto& q : rule) wsum += q.w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    // Reference triangle (0,0),(1,0),(0,1): x = l1, y = l2, area = 1/2.
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        double integral = 0.0;
        for (const auto& q : rule)
          integral += 0.5 * q.w * std::pow(q.l1, a) * std::pow(q.l2, b);
        CHECK(integral ==
              doctest::Approx(oracle::ref_triangle_monomial(a, b))
                  .epsilon(1e-13));
      }
    }
  }

  TEST_CASE("segment rule integrates monomials to degree 5") {
    const auto& rule = seg_quadrature_3();
    for (int d = 0; d <= 5; ++d) {
      double integral = 0.0;
      for (const auto& q : rule) integral += q.w * std::pow(q.s, d);
      CHECK(integral == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
    }
  }

  TEST_CASE("quadratic basis: nodal interpolation and partition of unity") {
    const Mesh mesh = unit_square();
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellFrame frame(mesh, c);
      // Node positions: vertices then edge midpoints in local facet order.
      std::array<Point2, 6> nodes;
      for (int i = 0; i < 3; ++i) nodes[i] = frame.p[i];
      nodes[3] = {0.5 * (frame.p[0].x + frame.p[1].x),
                  0.5 * (frame.p[0].y + frame.p[1].y)};
      nodes[4] = {0.5 * (frame.p[1].x + frame.p[2].x),
                  0.5 * (frame.p[1].y + frame.p[2].y)};
      nodes[5] = {0.5 * (frame.p[2].x + frame.p[0].x),
                  0.5 * (frame.p[2].y + frame.p[0].y)};
      for (int n = 0; n < 6; ++n) {
        const P2Basis basis = frame.eval(nodes[n]);
        for (int i = 0; i < 6; ++i)
          CHECK(basis.N[i] == doctest::Approx(i == n ? 1.0 : 0.0).epsilon(1e-12));
      }
      std::mt19937 rng(7);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int trial = 0; trial < 5; ++trial) {
        double l1 = u(rng), l2 = u(rng) * (1.0 - l1);
        Point2 pt{frame.p[0].x + l1 * (frame.p[1].x - frame.p[0].x) +
                      l2 * (frame.p[2].x - frame.p[0].x),
                  frame.p[0].y + l1 * (frame.p[1].y - frame.p[0].y) +
                      l2 * (frame.p[2].y - frame.p[0].y)};
        const P2Basis basis = frame.eval(pt);
        double sn = 0.0, sgx = 0.0, sgy = 0.0;
        for (int i = 0; i < 6; ++i) {
          sn += basis.N[i];
          sgx += basis.grad[i][0];
          sgy += basis.grad[i][1];
        }
        CHECK(sn == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sgx == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(sgy == doctest::Approx(0.0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("quadratic field is reproduced with exact gradient and Hessian") {
    const Mesh mesh = unit_square();
    auto f = [](const Point2& p) {
      return 1.7 + 0.3 * p.x - 1.1 * p.y + 2.0 * p.x * p.x -
             0.7 * p.x * p.y + 1.3 * p.y * p.y;
    };
    auto fx = [](const Point2& p) { return 0.3 + 4.0 * p.x - 0.7 * p.y; };
    auto fy = [](const Point2& p) { return -1.1 - 0.7 * p.x + 2.6 * p.y; };
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellFrame frame(mesh, c);
      std::array<Point2, 6> nodes;
      for (int i = 0; i < 3; ++i) nodes[i] = frame.p[i];
      nodes[3] = {0.5 * (frame.p[0].x + frame.p[1].x),
                  0.5 * (frame.p[0].y + frame.p[1].y)};
      nodes[4] = {0.5 * (frame.p[1].x + frame.p[2].x),
                  0.5 * (frame.p[1].y + frame.p[2].y)};
      nodes[5] = {0.5 * (frame.p[2].x + frame.p[0].x),
                  0.5 * (frame.p[2].y + frame.p[0].y)};
      double coeff[6];
      for (int i = 0; i < 6; ++i) coeff[i] = f(nodes[i]);

      const Point2 pt{0.31, 0.17};
      const P2Basis basis = frame.eval(pt);
      double val = 0.0, gx = 0.0, gy = 0.0;
      for (int i = 0; i < 6; ++i) {
        val += coeff[i] * basis.N[i];
        gx += coeff[i] * basis.grad[i][0];
        gy += coeff[i] * basis.grad[i][1];
      }
      CHECK(val == doctest::Approx(f(pt)).epsilon(1e-12));
      CHECK(gx == doctest::Approx(fx(pt)).epsilon(1e-11));
      CHECK(gy == doctest::Approx(fy(pt)).epsilon(1e-11));

      const auto hess = frame.hessians();
      double hxx = 0.0, hxy = 0.0, hyy = 0.0;
      for (int i = 0; i < 6; ++i) {
        hxx += coeff[i] * hess[i][0];
        hxy += coeff[i] * hess[i][1];
        hyy += coeff[i] * hess[i][2];
      }
      CHECK(hxx == doctest::Approx(4.0).epsilon(1e-11));
      CHECK(hxy == doctest::Approx(-0.7).epsilon(1e-10));
      CHECK(hyy == doctest::Approx(2.6).epsilon(1e-11));
    }
  }

  TEST_CASE("barycentric coordinates invert the affine map") {
    const Mesh mesh = unit_square();
    const CellFrame frame(mesh, 0);
    const Point2 pt{0.2, 0.45};
    const auto l = frame.barycentric(pt);
    CHECK(l[0] + l[1] + l[2] == doctest::Approx(1.0).epsilon(1e-13));
    const double x = l[0] * frame.p[0].x + l[1] * frame.p[1].x + l[2] * frame.p[2].x;
    const double y = l[0] * frame.p[0].y + l[1] * frame.p[1].y + l[2] * frame.p[2].y;
    CHECK(x == doctest::Approx(pt.x).epsilon(1e-13));
    CHECK(y == doctest::Approx(pt.y).epsilon(1e-13));
  }

  TEST_CASE("space enumerates vertex and edge degrees of freedom") {
    const Mesh mesh = unit_square();
    const P2Space space = P2Space::build(mesh);
    CHECK(space.n_vertex_dofs == mesh.n_vertices());
    CHECK(space.n_dofs == mesh.n_vertices() + mesh.n_facets());
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const auto dofs = space.cell_dofs(mesh, c);
      for (int i = 0; i < 3; ++i) {
        CHECK(dofs[i] == mesh.cells[c].v[i]);
        CHECK(dofs[3 + i] == space.facet_dof(mesh.cells[c].facets[i]));
      }
    }
    for (int f = 0; f < mesh.n_facets(); ++f) {
      const auto tr = space.facet_trace_dofs(mesh, f);
      CHECK(tr[0] == mesh.facets[f].v[0]);
      CHECK(tr[1] == mesh.facets[f].v[1]);
      CHECK(tr[2] == space.facet_dof(f));
    }
  }
}
