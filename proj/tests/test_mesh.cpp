#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "stokes/errors.hpp"
#include "stokes/mesh.hpp"

using namespace stokes;

namespace {

Mesh single_triangle() {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.corners = {{0, 0}, {1, 0}, {0, 1}};
  classify(m);
  return m;
}

int count_class(const Mesh& m, VertexClass c) {
  int n = 0;
  for (auto v : m.vclass) n += v == c;
  return n;
}

double min_diameter(const Mesh& m) {
  const ShapeReport r = shape_report(m);
  return *std::min_element(r.hK.begin(), r.hK.end());
}

}  // namespace

TEST(Classify, UnitSquareHasFourCorners) {
  const Mesh m = gen_crossed_rectangle(0, 1, 0, 1, 2, 2);
  EXPECT_EQ(count_class(m, VertexClass::Corner), 4);
}

TEST(Classify, TShapeHasEightCorners) {
  for (int n : {1, 3}) EXPECT_EQ(count_class(gen_tshape(n), VertexClass::Corner), 8);
}

TEST(Classify, InteriorVerticesHaveAtLeastThreeElements) {
  for (const Mesh& m : {gen_moffatt_wedge(), gen_tshape(2), gen_crossed_rectangle(0, 2, 0, 1, 2, 1)})
    for (int v = 0; v < m.nv(); ++v)
      if (m.vclass[v] == VertexClass::Interior) EXPECT_GE(m.vert_elems[v].size(), 3u);
}

TEST(Classify, EulerRelationAndEdgeIncidence) {
  for (const Mesh& m : {gen_moffatt_wedge(), gen_tshape(4), refine_uniform(gen_moffatt_wedge())}) {
    EXPECT_EQ(m.nv() - m.ne() + m.nt(), 1);
    for (const auto& e : m.edges) EXPECT_TRUE(e.elems.size() == 1 || e.elems.size() == 2);
    int boundary_vertices = 0;
    for (auto c : m.vclass) boundary_vertices += c != VertexClass::Interior;
    int boundary_edges = 0;
    for (const auto& e : m.edges) boundary_edges += e.boundary();
    EXPECT_EQ(boundary_edges, boundary_vertices);
  }
}

TEST(Classify, AffineMapsReproduceVertices) {
  const Mesh m = gen_tshape(2);
  const double xs[3] = {0, 1, 0}, ys[3] = {0, 0, 1};
  for (int K = 0; K < m.nt(); ++K)
    for (int i = 0; i < 3; ++i)
      EXPECT_LT((m.maps[K].apply(xs[i], ys[i]) - m.vertices[m.triangles[K][i]]).norm(), 1e-15);
}

TEST(Classify, DegenerateTriangleThrows) {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {2, 0}};
  m.triangles = {{0, 1, 2}};
  m.corners = {{0, 0}, {2, 0}};
  EXPECT_THROW(classify(m), InputError);
}

TEST(Classify, NonconformingMeshThrows) {
  // Hanging node: vertex 4 sits on the edge 1-2 of the first triangle.
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}};
  m.triangles = {{0, 1, 2}, {1, 3, 4}, {4, 3, 2}};
  m.corners = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_THROW(classify(m), InputError);
}

TEST(CornerSplit, SingleTriangleIsNotCornerSplit) {
  const auto r = corner_split_check(single_triangle());
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.offending.size(), 1u);
}

TEST(CornerSplit, BuiltInMeshes) {
  EXPECT_TRUE(corner_split_check(gen_crossed_rectangle(0, 1, 0, 1, 1, 1)).ok);
  EXPECT_TRUE(corner_split_check(gen_moffatt_wedge()).ok);
  for (int n = 1; n <= 5; ++n) EXPECT_TRUE(corner_split_check(gen_tshape(n)).ok) << n;
}

TEST(Shape, EquilateralRatio) {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  m.triangles = {{0, 1, 2}};
  m.corners = m.vertices;
  classify(m);
  EXPECT_NEAR(shape_report(m).kappa, 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(Shape, BuiltInKappa) {
  EXPECT_NEAR(shape_report(gen_moffatt_wedge()).kappa, 0.1508, 0.15 * 0.1508);
  EXPECT_NEAR(shape_report(gen_tshape(1)).kappa, 0.1695, 0.15 * 0.1695);
  for (int n = 2; n <= 4; ++n) EXPECT_NEAR(shape_report(gen_tshape(n)).kappa, 0.0829, 0.15 * 0.0829);
}

TEST(Moffatt, Topology) {
  const Mesh m = gen_moffatt_wedge();
  EXPECT_EQ(m.nt(), 18);
  EXPECT_TRUE(corner_split_check(m).ok);
  int lid = 0;
  for (int v = 0; v < m.nv(); ++v) {
    const Vec2& x = m.vertices[v];
    if (std::abs(x.y()) < 1e-14 && x.x() > -1 + 1e-12 && x.x() < 1 - 1e-12) {
      EXPECT_EQ(m.vclass[v], VertexClass::BoundaryNoncorner);
      ++lid;
    }
  }
  EXPECT_GT(lid, 0);
}

TEST(TShape, GradingRatio) {
  const double sigma = 0.08;
  for (int n = 1; n <= 3; ++n) {
    const double r = min_diameter(gen_tshape(n + 1, sigma)) / min_diameter(gen_tshape(n, sigma));
    EXPECT_NEAR(r, sigma, 0.1 * sigma) << n;
  }
}

TEST(TShape, KappaStabilizes) {
  const double k1 = shape_report(gen_tshape(1)).kappa;
  const double k2 = shape_report(gen_tshape(2)).kappa;
  const double k3 = shape_report(gen_tshape(3)).kappa;
  EXPECT_GT(k1, k2);
  EXPECT_NEAR(k3, k2, 0.05 * k2);
}

TEST(TShape, BadLayerCountThrows) {
  EXPECT_THROW(gen_tshape(0), InputError);
  EXPECT_THROW(gen_tshape(9), InputError);
}

TEST(Refine, QuadruplesElements) {
  const Mesh m = gen_moffatt_wedge();
  const Mesh r = refine_uniform(m);
  EXPECT_EQ(r.nt(), 4 * m.nt());
  EXPECT_NEAR(r.domain_area(), m.domain_area(), 1e-13);
  EXPECT_TRUE(corner_split_check(r).ok);
}

TEST(MeshIO, RoundTrip) {
  const Mesh m = gen_moffatt_wedge();
  std::stringstream s;
  write_mesh(m, s);
  const Mesh r = read_mesh(s);
  ASSERT_EQ(r.nv(), m.nv());
  ASSERT_EQ(r.nt(), m.nt());
  for (int v = 0; v < m.nv(); ++v) EXPECT_EQ(r.vertices[v], m.vertices[v]);
  for (int K = 0; K < m.nt(); ++K) EXPECT_EQ(r.triangles[K], m.triangles[K]);
  EXPECT_EQ(r.corners.size(), m.corners.size());
}

TEST(MeshIO, MissingVertexReportsLine) {
  std::istringstream s(
      "tris2d v1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 5\ncorners 3\n0 0\n1 0\n0 1\n");
  try {
    read_mesh(s);
    FAIL() << "expected a parse error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos) << e.what();
  }
}

TEST(MeshIO, MalformedHeader) {
  std::istringstream s("mesh\n");
  EXPECT_THROW(read_mesh(s), InputError);
}

TEST(MeshIO, ClockwiseTriangleIsReoriented) {
  std::istringstream s(
      "tris2d v1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 2 1\ncorners 3\n0 0\n1 0\n0 1\n");
  const Mesh m = read_mesh(s);
  EXPECT_EQ(m.reoriented, 1);
  EXPECT_GT(m.maps[0].det, 0.0);
}

TEST(MeshIO, MissingFileThrows) {
  EXPECT_THROW(read_mesh_file("/nonexistent/mesh.txt"), InputError);
}
