#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace stokes {

using Vec2 = Eigen::Vector2d;

enum class VertexClass { Corner, BoundaryNoncorner, Interior };

struct MeshEdge {
  int v0 = 0, v1 = 0;        // v0 < v1; tangent runs v0 -> v1
  std::vector<int> elems;    // incident triangles (1 or 2)
  std::vector<int> local;    // local edge number in each incident triangle
  bool boundary() const { return elems.size() == 1; }
};

struct AffineMap {
  Eigen::Matrix2d J;     // columns v1 - v0, v2 - v0
  Eigen::Matrix2d Jinv;
  Vec2 b;                // v0
  double det = 0.0;
  Vec2 apply(double x, double y) const { return b + J * Vec2(x, y); }
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec2> corners;  // polygon corners of the domain

  // Filled by classify().
  std::vector<MeshEdge> edges;
  std::vector<std::array<int, 3>> tri_edges;  // local edge e (opposite vertex e) -> edge id
  std::vector<VertexClass> vclass;
  std::vector<std::vector<int>> vert_elems, vert_edges;
  std::vector<Vec2> normal;  // outward unit normal at boundary-noncorner vertices
  std::vector<AffineMap> maps;
  int reoriented = 0;        // triangles flipped to counterclockwise order
  bool classified = false;

  int nv() const { return static_cast<int>(vertices.size()); }
  int nt() const { return static_cast<int>(triangles.size()); }
  int ne() const { return static_cast<int>(edges.size()); }
  double area(int K) const { return 0.5 * maps[K].det; }
  double domain_area() const;
  Vec2 edge_tangent(int e) const;  // unit, v0 -> v1
  // Outward unit normal of a boundary edge.
  Vec2 edge_normal(int e) const;
};

// Orients triangles, builds edges, vertex classes, normals and affine maps.
// Throws InputError on nonconforming or degenerate input.
void classify(Mesh& m);

struct CornerSplitResult {
  bool ok = true;
  std::vector<int> offending;
};
CornerSplitResult corner_split_check(const Mesh& m);

struct ShapeReport {
  double kappa = 0.0;
  double h = 0.0;
  std::vector<double> hK, rhoK;
};
// rho_K is the inscribed-circle diameter 4|K|/perimeter.
ShapeReport shape_report(const Mesh& m);

Mesh gen_moffatt_wedge();
Mesh gen_tshape(int n_layers, double sigma = 0.08);
// [x0,x1]x[y0,y1] divided into nx*ny squares, each cut into 4 by its center.
Mesh gen_crossed_rectangle(double x0, double x1, double y0, double y1, int nx, int ny);
// Red refinement: each triangle into four.
Mesh refine_uniform(const Mesh& m);

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& m, std::ostream& out);
void write_mesh_file(const Mesh& m, const std::string& path);

const char* to_string(VertexClass c);

}  // namespace stokes
