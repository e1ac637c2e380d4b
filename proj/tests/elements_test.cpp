#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fpsi/elements.hpp"

namespace {

using fpsi::BoundaryTag;
using fpsi::CellType;
using fpsi::Vec2;

double integrate_monomial(const fpsi::QuadratureRule& q, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
  }
  return s;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

TEST(Quadrature, Examples) {
  const auto q1 = fpsi::quadrature_rule(CellType::Triangle, 1);
  ASSERT_EQ(q1.points.size(), 1u);
  EXPECT_DOUBLE_EQ(q1.weights[0], 0.5);

  const auto s3 = fpsi::quadrature_rule(CellType::Segment, 3);
  ASSERT_EQ(s3.points.size(), 2u);
  double v = 0.0;
  for (std::size_t i = 0; i < 2; ++i) v += s3.weights[i] * std::pow(s3.points[i].x, 3);
  EXPECT_NEAR(v, 0.25, 1e-15);

  EXPECT_NEAR(integrate_monomial(fpsi::quadrature_rule(CellType::Triangle, 4), 2, 2), 1.0 / 180.0,
              1e-14);
}

TEST(Quadrature, TriangleExactness) {
  for (int order = 1; order <= 6; ++order) {
    const auto q = fpsi::quadrature_rule(CellType::Triangle, order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(integrate_monomial(q, a, b), exact, 1e-14) << order << " " << a << " " << b;
      }
    }
  }
  EXPECT_THROW(fpsi::quadrature_rule(CellType::Triangle, 7), fpsi::Error);
}

TEST(Quadrature, SegmentExactness) {
  for (int order = 1; order <= 12; ++order) {
    const auto q = fpsi::quadrature_rule(CellType::Segment, order);
    for (int a = 0; a <= order; ++a) {
      EXPECT_NEAR(integrate_monomial(q, a, 0), 1.0 / (a + 1), 1e-14);
    }
  }
}

TEST(Basis, Examples) {
  const auto p1 = fpsi::reference_basis(CellType::Triangle, 1, 1, {1.0 / 3.0, 1.0 / 3.0});
  for (double v : p1.values) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);

  const auto p2 = fpsi::reference_basis(CellType::Triangle, 2, 2, {0.21, 0.37});
  EXPECT_EQ(p2.count(), 12);
  double s = 0.0;
  Vec2 g;
  for (int i = 0; i < 6; ++i) {
    s += p2.values[i];
    g = g + p2.gradients[i];
  }
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_NEAR(g.x, 0.0, 1e-14);
  EXPECT_NEAR(g.y, 0.0, 1e-14);

  const auto seg = fpsi::reference_basis(CellType::Segment, 1, 1, {0.5, 0.0});
  EXPECT_DOUBLE_EQ(seg.values[0], 0.5);
  EXPECT_DOUBLE_EQ(seg.values[1], 0.5);
  EXPECT_DOUBLE_EQ(seg.gradients[0].x, -1.0);
  EXPECT_DOUBLE_EQ(seg.gradients[1].x, 1.0);

  EXPECT_THROW(fpsi::reference_basis(CellType::Triangle, 3, 1, {0.1, 0.1}), fpsi::Error);
}

TEST(Basis, NodalProperty) {
  const std::vector<Vec2> nodes = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}, {0, 0.5}, {0.5, 0}};
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const auto b = fpsi::reference_basis(CellType::Triangle, 2, 1, nodes[j]);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(b.values[i], i == j ? 1.0 : 0.0, 1e-15);
  }
}

fpsi::SubdomainMesh unit_square(int n) {
  fpsi::TagSpec t;
  t.primary.fill(BoundaryTag::DirichletF);
  t.pressure.fill(BoundaryTag::DirichletF);
  return fpsi::build_rect_mesh({0, 0, 1, 1}, n, n, fpsi::SubdomainId::Fluid, t);
}

TEST(Space, Counts) {
  const auto m = unit_square(1);
  const std::vector<BoundaryTag> none;
  const std::vector<BoundaryTag> dir = {BoundaryTag::DirichletF};
  EXPECT_EQ(fpsi::build_space(m, 2, 2, none).dofs(), 18);
  const auto p1 = fpsi::build_space(m, 1, 1, dir);
  EXPECT_EQ(p1.dofs(), 4);
  EXPECT_EQ(p1.dirichlet_dofs().size(), 4u);

  const auto g = fpsi::standard_geometry(4);
  const auto p0 = fpsi::build_space(*g.interface, 0);
  EXPECT_EQ(p0.dofs(), 4);
  EXPECT_TRUE(p0.dirichlet_dofs().empty());
  EXPECT_EQ(fpsi::build_space(*g.interface, 1).dofs(), 5);
}

TEST(Space, StandardMasks) {
  const auto g = fpsi::standard_geometry(2);
  const std::vector<BoundaryTag> dir = {BoundaryTag::DirichletF};
  const auto u = fpsi::build_space(*g.fluid, 2, 2, dir);
  for (int i = 0; i < u.n_nodes; ++i) {
    const Vec2 x = u.node_coords[i];
    const bool lateral = x.x == 0.0 || x.x == 1.0;
    EXPECT_EQ(static_cast<bool>(u.dirichlet[u.dof(0, i)]), lateral);
    EXPECT_EQ(static_cast<bool>(u.dirichlet[u.dof(1, i)]), lateral);
  }
}

TEST(Space, AffineReproduction) {
  const auto m = unit_square(3);
  const std::vector<BoundaryTag> none;
  const auto aff = [](Vec2 x) { return 1.5 - 2.0 * x.x + 0.75 * x.y; };
  const auto q = fpsi::quadrature_rule(CellType::Triangle, 4);
  for (int deg : {1, 2}) {
    const auto sp = fpsi::build_space(m, deg, 1, none);
    const auto c = fpsi::interpolate(sp, fpsi::ScalarFn(aff));
    for (int cell = 0; cell < sp.cells(); ++cell) {
      for (const auto& p : q.points) {
        const Vec2 x = sp.map_to_physical(cell, p);
        EXPECT_NEAR(fpsi::evaluate_scalar(sp, c, cell, p), aff(x), 1e-13);
        const Vec2 gr = fpsi::evaluate_scalar_gradient(sp, c, cell, p);
        EXPECT_NEAR(gr.x, -2.0, 1e-12);
        EXPECT_NEAR(gr.y, 0.75, 1e-12);
        const Vec2 r = sp.map_to_reference(cell, x);
        EXPECT_NEAR(r.x, p.x, 1e-14);
        EXPECT_NEAR(r.y, p.y, 1e-14);
      }
    }
  }
}

TEST(Space, QuadraticVectorReproduction) {
  const auto m = unit_square(2);
  const std::vector<BoundaryTag> none;
  const auto sp = fpsi::build_space(m, 2, 2, none);
  const auto f = [](Vec2 x) { return Vec2{x.x * x.y, x.y * x.y - x.x}; };
  const auto c = fpsi::interpolate(sp, fpsi::VectorFn(f));
  const auto q = fpsi::quadrature_rule(CellType::Triangle, 3);
  for (int cell = 0; cell < sp.cells(); ++cell) {
    for (const auto& p : q.points) {
      const Vec2 x = sp.map_to_physical(cell, p);
      const Vec2 v = fpsi::evaluate_vector(sp, c, cell, p);
      EXPECT_NEAR(v.x, f(x).x, 1e-13);
      EXPECT_NEAR(v.y, f(x).y, 1e-13);
      const auto G = fpsi::evaluate_vector_gradient(sp, c, cell, p);
      EXPECT_NEAR(G[0][0], x.y, 1e-12);
      EXPECT_NEAR(G[0][1], x.x, 1e-12);
      EXPECT_NEAR(G[1][0], -1.0, 1e-12);
      EXPECT_NEAR(G[1][1], 2.0 * x.y, 1e-12);
    }
  }
}

}  // namespace
