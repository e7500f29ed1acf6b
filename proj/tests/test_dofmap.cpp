#include <gtest/gtest.h>

#include <random>
#include <set>

#include "stokes/dofmap.hpp"
#include "stokes/errors.hpp"
#include "stokes/refelem.hpp"

using namespace stokes;

namespace {

// Value and physical gradient of the global scalar field with coefficients c
// (indexed by scalar id) on element K at the physical point x.
struct Local {
  double v;
  Vec2 g;
};

Local eval_scalar(const Mesh& m, const DofMap& dm, int K, const Eigen::VectorXd& c, const Vec2& x) {
  const ElementDofs& ed = dm.elem[K];
  Eigen::VectorXd cl(ed.vscalar.size());
  for (std::size_t s = 0; s < ed.vscalar.size(); ++s) cl(s) = c(ed.vscalar[s]);
  const Eigen::VectorXd r = ed.C.transpose() * cl;
  const Vec2 xh = m.maps[K].Jinv * (x - m.maps[K].b);
  Eigen::VectorXd val, dx, dy;
  eval_velocity_basis(dm.k, xh.x(), xh.y(), val, dx, dy);
  const Vec2 gh(r.dot(dx), r.dot(dy));
  return {r.dot(val), m.maps[K].Jinv.transpose() * gh};
}

Eigen::VectorXd random_coefficients(const DofMap& dm, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  Eigen::VectorXd c(dm.scalars.size());
  for (int i = 0; i < c.size(); ++i) c(i) = U(rng);
  return c;
}

Mesh single_triangle() {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.corners = m.vertices;
  classify(m);
  return m;
}

}  // namespace

TEST(DofMap, InteriorVertexDirectionsAndPressure) {
  const Mesh m = gen_crossed_rectangle(0, 2, 0, 2, 2, 2);
  const DofMap dm = build_dofmap(m, 4);
  int seen = 0;
  for (int a = 0; a < m.nv(); ++a) {
    if (m.vclass[a] != VertexClass::Interior) continue;
    ++seen;
    ASSERT_EQ(dm.vertex_c1[a].size(), 2u);
    EXPECT_LT((dm.scalars[dm.vertex_c1[a][0]].dir - Vec2(1, 0)).norm(), 1e-15);
    EXPECT_LT((dm.scalars[dm.vertex_c1[a][1]].dir - Vec2(0, 1)).norm(), 1e-15);
    EXPECT_EQ(dm.vertex_pressure[a].size(), 1u);
    for (int s : dm.vertex_c1[a]) EXPECT_FALSE(dm.scalars[s].constrained);
    EXPECT_FALSE(dm.scalars[dm.vertex_c0[a]].constrained);
  }
  EXPECT_GT(seen, 0);
}

TEST(DofMap, DirectionsAreUnitVectors) {
  const Mesh m = gen_tshape(2);
  const DofMap dm = build_dofmap(m, 5);
  for (const auto& s : dm.scalars)
    if (s.kind == VelKind::C1Vertex) EXPECT_NEAR(s.dir.norm(), 1.0, 1e-14);
}

TEST(DofMap, CornerVertexRules) {
  bool found3 = false;
  for (const Mesh& m : {gen_moffatt_wedge(), gen_tshape(1), gen_tshape(3)}) {
    const DofMap dm = build_dofmap(m, 4);
    for (int a = 0; a < m.nv(); ++a) {
      if (m.vclass[a] != VertexClass::Corner) continue;
      const int nedges = static_cast<int>(m.vert_edges[a].size());
      EXPECT_EQ(static_cast<int>(dm.vertex_c1[a].size()), nedges);
      EXPECT_EQ(dm.vertex_pressure[a].size(), m.vert_elems[a].size());
      found3 = found3 || nedges == 3;
      int free = 0;
      for (int s : dm.vertex_c1[a]) free += !dm.scalars[s].constrained;
      // Both boundary edge tangents are constrained, interior ones are free.
      EXPECT_EQ(free, nedges - 2);
    }
  }
  EXPECT_TRUE(found3);
}

TEST(DofMap, BoundaryNoncornerKeepsOnlyTheNormal) {
  const Mesh m = gen_moffatt_wedge();
  const DofMap dm = build_dofmap(m, 4);
  for (int a = 0; a < m.nv(); ++a) {
    if (m.vclass[a] != VertexClass::BoundaryNoncorner) continue;
    int free = 0;
    for (int s : dm.vertex_c1[a])
      if (!dm.scalars[s].constrained) {
        ++free;
        EXPECT_LT((dm.scalars[s].dir - m.normal[a]).norm(), 1e-14);
      }
    EXPECT_EQ(free, 1);
    EXPECT_TRUE(dm.scalars[dm.vertex_c0[a]].constrained);
  }
}

TEST(DofMap, ElementInteriorCounts) {
  for (int k = 4; k <= 8; ++k) {
    const Mesh m = gen_moffatt_wedge();
    const DofMap dm = build_dofmap(m, k);
    EXPECT_EQ(dm.nI, m.nt() * 2 * (k - 1) * (k - 2) / 2);
    EXPECT_EQ(dm.ni, m.nt() * (k * k + k - 8) / 2);
  }
}

TEST(DofMap, NumberingHasNoGaps) {
  const Mesh m = gen_tshape(2);
  const DofMap dm = build_dofmap(m, 6);
  EXPECT_EQ(static_cast<int>(dm.vdofs.size()), dm.nvel());
  EXPECT_EQ(static_cast<int>(dm.pdofs.size()), dm.npres());
  std::set<int> seen;
  for (const auto& sv : dm.scalar_vel)
    for (int v : sv) EXPECT_TRUE(seen.insert(v).second);
  EXPECT_EQ(static_cast<int>(seen.size()), dm.nvel());
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), dm.nvel() - 1);
  // Free exterior, constrained, interior.
  for (int v = 0; v < dm.nvel(); ++v) {
    const ScalarDof& s = dm.scalars[dm.vdofs[v].scalar];
    if (v < dm.nE) EXPECT_TRUE(!s.constrained && s.kind != VelKind::Interior);
    else if (v < dm.nE + dm.nC) EXPECT_TRUE(s.constrained);
    else EXPECT_EQ(s.kind, VelKind::Interior);
  }
  for (int p = 0; p < dm.npres(); ++p) {
    if (p < dm.n_pvertex) EXPECT_EQ(dm.pdofs[p].kind, PresKind::Vertex);
    else if (p < dm.ne) EXPECT_EQ(dm.pdofs[p].kind, PresKind::Average);
    else EXPECT_EQ(dm.pdofs[p].kind, PresKind::Interior);
  }
}

TEST(DofMap, PreconditionerBlocksAreContiguous) {
  const Mesh m = gen_moffatt_wedge();
  const int k = 6;
  const DofMap dm = build_dofmap(m, k);
  int next = dm.c0_block.start + dm.c0_block.size;
  EXPECT_EQ(dm.c0_block.start, 0);
  for (const auto& b : dm.c1_blocks) {
    EXPECT_EQ(b.start, next);
    EXPECT_EQ(b.size, 2);
    next += b.size;
  }
  for (const auto& b : dm.edge_blocks) {
    EXPECT_EQ(b.start, next);
    EXPECT_EQ(b.size, 2 * (k - 3));
    next += b.size;
  }
  EXPECT_EQ(next, dm.nE);
}

TEST(DofMap, NotCornerSplitThrows) {
  EXPECT_THROW(build_dofmap(single_triangle(), 4), ConfigurationError);
}

TEST(DofMap, PatchAreas) {
  const Mesh m = gen_tshape(1);
  const DofMap dm = build_dofmap(m, 4);
  for (int a = 0; a < m.nv(); ++a) {
    double star = 0;
    for (int K : m.vert_elems[a]) star += m.area(K);
    double sum = 0;
    for (int p : dm.vertex_pressure[a]) sum += dm.patch_area[p];
    EXPECT_NEAR(sum, star, 1e-14);
    if (m.vclass[a] == VertexClass::Corner)
      for (int p : dm.vertex_pressure[a]) EXPECT_DOUBLE_EQ(dm.patch_area[p], m.area(dm.pdofs[p].elem));
  }
}

TEST(DofMap, C1ContinuityAtNoncornerVertices) {
  for (int k : {4, 7}) {
    const Mesh m = gen_tshape(2);
    const DofMap dm = build_dofmap(m, k);
    const Eigen::VectorXd c = random_coefficients(dm, 7);
    for (int a = 0; a < m.nv(); ++a) {
      if (m.vclass[a] == VertexClass::Corner) continue;
      const auto& T = m.vert_elems[a];
      const Local ref = eval_scalar(m, dm, T[0], c, m.vertices[a]);
      for (int K : T) {
        const Local l = eval_scalar(m, dm, K, c, m.vertices[a]);
        EXPECT_NEAR(l.v, ref.v, 1e-10);
        EXPECT_LT((l.g - ref.g).norm(), 1e-10 * (1 + ref.g.norm()));
      }
    }
  }
}

TEST(DofMap, CornersAreContinuousWithMatchingEdgeTangents) {
  const Mesh m = gen_tshape(1);
  const DofMap dm = build_dofmap(m, 5);
  const Eigen::VectorXd c = random_coefficients(dm, 11);
  for (int a = 0; a < m.nv(); ++a) {
    if (m.vclass[a] != VertexClass::Corner) continue;
    for (int e : m.vert_edges[a]) {
      if (m.edges[e].boundary()) continue;
      const Vec2 t = m.edge_tangent(e);
      const Local l0 = eval_scalar(m, dm, m.edges[e].elems[0], c, m.vertices[a]);
      const Local l1 = eval_scalar(m, dm, m.edges[e].elems[1], c, m.vertices[a]);
      EXPECT_NEAR(l0.v, l1.v, 1e-10);
      EXPECT_NEAR(l0.g.dot(t), l1.g.dot(t), 1e-9 * (1 + l0.g.norm()));
    }
  }
}

TEST(DofMap, TracesAgreeAcrossInteriorEdges) {
  const Mesh m = gen_moffatt_wedge();
  const DofMap dm = build_dofmap(m, 6);
  const Eigen::VectorXd c = random_coefficients(dm, 3);
  for (int e = 0; e < m.ne(); ++e) {
    const MeshEdge& E = m.edges[e];
    if (E.boundary()) continue;
    for (double s : {0.13, 0.5, 0.77}) {
      const Vec2 x = (1 - s) * m.vertices[E.v0] + s * m.vertices[E.v1];
      const Local l0 = eval_scalar(m, dm, E.elems[0], c, x);
      const Local l1 = eval_scalar(m, dm, E.elems[1], c, x);
      EXPECT_NEAR(l0.v, l1.v, 1e-10 * (1 + std::abs(l0.v)));
    }
  }
}

TEST(DofMap, V0MaskMatchesScalars) {
  const Mesh m = gen_moffatt_wedge();
  const DofMap dm = build_dofmap(m, 4);
  const V0Mask mask = v0_mask(dm);
  int n = 0;
  for (bool b : mask.constrained) n += b;
  EXPECT_EQ(n, dm.nC);
}
