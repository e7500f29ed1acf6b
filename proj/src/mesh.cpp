#include "stokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

double bbox_diameter(const std::vector<Vec2>& v) {
  if (v.empty()) return 1.0;
  Vec2 lo = v[0], hi = v[0];
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return std::max((hi - lo).norm(), 1e-300);
}

double tri_kappa(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
  const double A = 0.5 * std::abs(signed_area2(a, b, c));
  return 4.0 * A / (la + lb + lc) / std::max({la, lb, lc});
}

// Deduplicating vertex store for the generators.
struct VertexPool {
  std::vector<Vec2> pts;
  std::map<std::pair<long long, long long>, int> index;
  int add(const Vec2& p) {
    const auto key = std::make_pair(std::llround(p.x() * 1e9), std::llround(p.y() * 1e9));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    pts.push_back(p);
    index[key] = static_cast<int>(pts.size()) - 1;
    return index[key];
  }
};

void add_ccw(std::vector<std::array<int, 3>>& tris, const std::vector<Vec2>& v, int a, int b,
             int c) {
  if (signed_area2(v[a], v[b], v[c]) < 0) std::swap(b, c);
  tris.push_back({a, b, c});
}

}  // namespace

const char* to_string(VertexClass c) {
  switch (c) {
    case VertexClass::Corner: return "corner";
    case VertexClass::BoundaryNoncorner: return "boundary";
    case VertexClass::Interior: return "interior";
  }
  return "?";
}

double Mesh::domain_area() const {
  double a = 0.0;
  for (int K = 0; K < nt(); ++K) a += area(K);
  return a;
}

Vec2 Mesh::edge_tangent(int e) const {
  return (vertices[edges[e].v1] - vertices[edges[e].v0]).normalized();
}

Vec2 Mesh::edge_normal(int e) const {
  const Vec2 t = edge_tangent(e);
  Vec2 n(t.y(), -t.x());
  const int K = edges[e].elems[0];
  const Vec2& opp = vertices[triangles[K][edges[e].local[0]]];
  if (n.dot(opp - vertices[edges[e].v0]) > 0) n = -n;
  return n;
}

void classify(Mesh& m) {
  const int nv = m.nv(), nt = m.nt();
  if (nv == 0 || nt == 0) throw InputError("mesh has no vertices or no triangles");
  const double scale = bbox_diameter(m.vertices);
  m.reoriented = 0;
  for (int K = 0; K < nt; ++K) {
    auto& t = m.triangles[K];
    for (int i = 0; i < 3; ++i)
      if (t[i] < 0 || t[i] >= nv)
        throw InputError("triangle " + std::to_string(K) + " references missing vertex");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw InputError("triangle " + std::to_string(K) + " repeats a vertex");
    const double s = signed_area2(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
    if (std::abs(s) <= 1e-14 * scale * scale)
      throw InputError("triangle " + std::to_string(K) + " is degenerate");
    if (s < 0) {
      std::swap(t[1], t[2]);
      ++m.reoriented;
    }
  }

  m.edges.clear();
  m.tri_edges.assign(nt, {-1, -1, -1});
  std::map<std::pair<int, int>, int> emap;
  for (int K = 0; K < nt; ++K) {
    for (int e = 0; e < 3; ++e) {
      int a = m.triangles[K][(e + 1) % 3], b = m.triangles[K][(e + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, fresh] = emap.try_emplace({a, b}, m.ne());
      if (fresh) m.edges.push_back({a, b, {}, {}});
      MeshEdge& E = m.edges[it->second];
      E.elems.push_back(K);
      E.local.push_back(e);
      if (E.elems.size() > 2)
        throw InputError("nonconforming mesh: edge shared by more than two triangles");
      m.tri_edges[K][e] = it->second;
    }
  }
  for (const auto& E : m.edges)
    if (E.elems.size() == 2) {
      // Two neighbours must lie on opposite sides of the shared edge.
      const Vec2 &p = m.vertices[E.v0], &q = m.vertices[E.v1];
      const double s0 = signed_area2(p, q, m.vertices[m.triangles[E.elems[0]][E.local[0]]]);
      const double s1 = signed_area2(p, q, m.vertices[m.triangles[E.elems[1]][E.local[1]]]);
      if (s0 * s1 >= 0) throw InputError("nonconforming mesh: overlapping triangles");
    }

  m.vert_elems.assign(nv, {});
  m.vert_edges.assign(nv, {});
  for (int K = 0; K < nt; ++K)
    for (int i = 0; i < 3; ++i) m.vert_elems[m.triangles[K][i]].push_back(K);
  for (int e = 0; e < m.ne(); ++e) {
    m.vert_edges[m.edges[e].v0].push_back(e);
    m.vert_edges[m.edges[e].v1].push_back(e);
  }
  for (int v = 0; v < nv; ++v)
    if (m.vert_elems[v].empty())
      throw InputError("vertex " + std::to_string(v) + " belongs to no triangle");

  std::vector<int> nbnd(nv, 0);
  for (const auto& E : m.edges)
    if (E.boundary()) {
      ++nbnd[E.v0];
      ++nbnd[E.v1];
    }
  // A vertex lying inside a boundary edge of a neighbour is a hanging node.
  for (int e = 0; e < m.ne(); ++e) {
    if (!m.edges[e].boundary()) continue;
    const Vec2 &p = m.vertices[m.edges[e].v0], &q = m.vertices[m.edges[e].v1];
    const double len = (q - p).norm();
    for (int v = 0; v < nv; ++v) {
      if (nbnd[v] == 0 || v == m.edges[e].v0 || v == m.edges[e].v1) continue;
      const Vec2& x = m.vertices[v];
      const double s = (x - p).dot(q - p) / (len * len);
      if (s > 1e-12 && s < 1 - 1e-12 &&
          std::abs(signed_area2(p, q, x)) < 1e-12 * len * len)
        throw InputError("nonconforming mesh: hanging vertex " + std::to_string(v));
    }
  }

  m.vclass.assign(nv, VertexClass::Interior);
  m.normal.assign(nv, Vec2::Zero());
  const double tol = 1e-10 * scale;
  std::vector<bool> corner_used(m.corners.size(), false);
  for (int v = 0; v < nv; ++v) {
    if (nbnd[v] == 0) continue;
    if (nbnd[v] != 2)
      throw InputError("boundary vertex " + std::to_string(v) + " is not a manifold point");
    m.vclass[v] = VertexClass::BoundaryNoncorner;
    for (std::size_t c = 0; c < m.corners.size(); ++c)
      if ((m.vertices[v] - m.corners[c]).norm() <= tol) {
        m.vclass[v] = VertexClass::Corner;
        corner_used[c] = true;
      }
  }
  for (std::size_t c = 0; c < m.corners.size(); ++c)
    if (!corner_used[c]) throw InputError("domain corner " + std::to_string(c) + " is not a boundary vertex");

  for (int v = 0; v < nv; ++v) {
    if (m.vclass[v] != VertexClass::BoundaryNoncorner) continue;
    Vec2 ns[2];
    int c = 0;
    for (int e : m.vert_edges[v])
      if (m.edges[e].boundary()) ns[c++] = m.edge_normal(e);
    if ((ns[0] - ns[1]).norm() > 1e-8)
      throw InputError("boundary vertex " + std::to_string(v) +
                       " sits where the boundary turns but is not listed as a corner");
    m.normal[v] = (ns[0] + ns[1]).normalized();
  }

  m.maps.resize(nt);
  for (int K = 0; K < nt; ++K) {
    const auto& t = m.triangles[K];
    AffineMap& F = m.maps[K];
    F.b = m.vertices[t[0]];
    F.J.col(0) = m.vertices[t[1]] - m.vertices[t[0]];
    F.J.col(1) = m.vertices[t[2]] - m.vertices[t[0]];
    F.det = F.J.determinant();
    F.Jinv = F.J.inverse();
  }
  m.classified = true;
}

CornerSplitResult corner_split_check(const Mesh& m) {
  CornerSplitResult r;
  for (int K = 0; K < m.nt(); ++K) {
    int nb = 0;
    for (int e = 0; e < 3; ++e) nb += m.edges[m.tri_edges[K][e]].boundary() ? 1 : 0;
    if (nb > 1) {
      r.ok = false;
      r.offending.push_back(K);
    }
  }
  return r;
}

ShapeReport shape_report(const Mesh& m) {
  ShapeReport r;
  r.kappa = 1.0;
  for (int K = 0; K < m.nt(); ++K) {
    const auto& t = m.triangles[K];
    const Vec2 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    const double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
    const double A = 0.5 * std::abs(signed_area2(a, b, c));
    if (A <= 0) throw InputError("degenerate triangle " + std::to_string(K));
    const double h = std::max({la, lb, lc});
    const double rho = 4.0 * A / (la + lb + lc);
    r.hK.push_back(h);
    r.rhoK.push_back(rho);
    r.h = std::max(r.h, h);
    r.kappa = std::min(r.kappa, rho / h);
  }
  return r;
}

Mesh gen_moffatt_wedge() {
  // Wedge of half-angle 28.5 degrees below the lid (-1,1)x{0}: five graded
  // rows of nodes on the two walls and the symmetry axis.
  constexpr double kHalfAngle = 28.5 * std::numbers::pi / 180.0;
  constexpr double kRatio = 0.323;
  const double H = 1.0 / std::tan(kHalfAngle);
  const Vec2 A(0.0, -H), L(-1.0, 0.0), R(1.0, 0.0), C(0.0, 0.0);
  Mesh m;
  m.vertices.push_back(A);
  std::vector<int> P, M, Q;
  const int levels = 5;
  for (int j = 0; j < levels; ++j) {
    const double s = std::pow(kRatio, levels - 1 - j);
    P.push_back(m.nv());
    m.vertices.push_back(A + s * (L - A));
    M.push_back(m.nv());
    m.vertices.push_back(A + s * (C - A));
    Q.push_back(m.nv());
    m.vertices.push_back(A + s * (R - A));
  }
  auto& T = m.triangles;
  auto add = [&](int a, int b, int c) { add_ccw(T, m.vertices, a, b, c); };
  add(0, P[0], M[0]);
  add(0, M[0], Q[0]);
  for (int j = 1; j < levels; ++j) {
    if (j < levels - 1) {
      add(P[j - 1], M[j - 1], M[j]);
      add(P[j - 1], M[j], P[j]);
      add(M[j - 1], Q[j - 1], M[j]);
      add(Q[j - 1], Q[j], M[j]);
    } else {
      // top row: diagonals chosen so no element has two lid/wall edges
      add(P[j - 1], M[j - 1], P[j]);
      add(M[j - 1], M[j], P[j]);
      add(M[j - 1], Q[j - 1], Q[j]);
      add(M[j - 1], Q[j], M[j]);
    }
  }
  m.corners = {A, L, R};
  classify(m);
  return m;
}

Mesh gen_crossed_rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (nx < 1 || ny < 1) throw InputError("rectangle needs at least one cell per direction");
  VertexPool pool;
  std::vector<std::array<int, 3>> tris;
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double xa = x0 + i * hx, ya = y0 + j * hy;
      const int c00 = pool.add({xa, ya}), c10 = pool.add({xa + hx, ya});
      const int c11 = pool.add({xa + hx, ya + hy}), c01 = pool.add({xa, ya + hy});
      const int mid = pool.add({xa + 0.5 * hx, ya + 0.5 * hy});
      tris.push_back({c00, c10, mid});
      tris.push_back({c10, c11, mid});
      tris.push_back({c11, c01, mid});
      tris.push_back({c01, c00, mid});
    }
  Mesh m;
  m.vertices = pool.pts;
  m.triangles = tris;
  m.corners = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  classify(m);
  return m;
}

namespace {

// Replaces the fan of triangles around vertex c by graded rings. Ring j
// (j = 1..n) is the fan outline scaled towards c by r1*sigma^(j-1). Ring
// quadrilaterals are split along the diagonal giving the better shape.
void grade_corner(VertexPool& pool, std::vector<std::array<int, 3>>& tris, int c, int n,
                  double r1, double sigma) {
  std::vector<std::array<int, 3>> fan, rest;
  for (const auto& t : tris) (std::find(t.begin(), t.end(), c) != t.end() ? fan : rest).push_back(t);
  // Outline edges (a, b) with (c, a, b) counterclockwise.
  std::map<int, int> next;
  std::map<int, int> indeg;
  for (auto t : fan) {
    while (t[0] != c) std::rotate(t.begin(), t.begin() + 1, t.end());
    next[t[1]] = t[2];
    ++indeg[t[2]];
  }
  int start = -1;
  for (const auto& [a, b] : next)
    if (!indeg.count(a)) start = a;
  if (start < 0) throw InputError("graded vertex is not on the boundary");
  std::vector<int> outline{start};
  while (next.count(outline.back())) outline.push_back(next[outline.back()]);

  const Vec2 pc = pool.pts[c];
  std::vector<std::vector<int>> rings{outline};
  for (int j = 1; j <= n; ++j) {
    const double s = r1 * std::pow(sigma, j - 1);
    std::vector<int> ring;
    for (int v : outline) ring.push_back(pool.add(pc + s * (pool.pts[v] - pc)));
    rings.push_back(ring);
  }
  const auto& P = pool.pts;
  for (int j = 0; j < n; ++j)
    for (std::size_t i = 0; i + 1 < outline.size(); ++i) {
      const int a = rings[j][i], b = rings[j][i + 1], d = rings[j + 1][i + 1], e = rings[j + 1][i];
      const double k1 = std::min(tri_kappa(P[a], P[b], P[d]), tri_kappa(P[a], P[d], P[e]));
      const double k2 = std::min(tri_kappa(P[a], P[b], P[e]), tri_kappa(P[b], P[d], P[e]));
      if (k1 >= k2) {
        add_ccw(rest, P, a, b, d);
        add_ccw(rest, P, a, d, e);
      } else {
        add_ccw(rest, P, a, b, e);
        add_ccw(rest, P, b, d, e);
      }
    }
  for (std::size_t i = 0; i + 1 < outline.size(); ++i)
    add_ccw(rest, P, c, rings[n][i], rings[n][i + 1]);
  tris = rest;
}

}  // namespace

Mesh gen_tshape(int n_layers, double sigma) {
  if (n_layers < 1 || n_layers > 8) throw InputError("T-shape layer count must be in [1, 8]");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InputError("grading factor must lie in (0, 1)");
  // Outer transition ring; sets the shape of the first layer.
  constexpr double kFirstRing = 0.16;
  constexpr double h = 0.5;
  VertexPool pool;
  std::vector<std::array<int, 3>> tris;
  auto square = [&](double xa, double ya) {
    const int c00 = pool.add({xa, ya}), c10 = pool.add({xa + h, ya});
    const int c11 = pool.add({xa + h, ya + h}), c01 = pool.add({xa, ya + h});
    const int mid = pool.add({xa + 0.5 * h, ya + 0.5 * h});
    tris.push_back({c00, c10, mid});
    tris.push_back({c10, c11, mid});
    tris.push_back({c11, c01, mid});
    tris.push_back({c01, c00, mid});
  };
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 6; ++i) square(-1.5 + i * h, j * h);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) square(-0.5 + i * h, -1.0 + j * h);
  for (const Vec2& c : {Vec2(-0.5, 0.0), Vec2(0.5, 0.0), Vec2(-0.5, -1.0), Vec2(0.5, -1.0)})
    grade_corner(pool, tris, pool.add(c), n_layers, kFirstRing, sigma);
  Mesh m;
  m.vertices = pool.pts;
  m.triangles = tris;
  m.corners = {{-1.5, 0.0}, {-0.5, 0.0}, {-0.5, -1.0}, {0.5, -1.0},
               {0.5, 0.0},  {1.5, 0.0},  {1.5, 1.0},   {-1.5, 1.0}};
  classify(m);
  return m;
}

Mesh refine_uniform(const Mesh& m) {
  VertexPool pool;
  for (const auto& v : m.vertices) pool.add(v);
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : m.triangles) {
    const int m01 = pool.add(0.5 * (m.vertices[t[0]] + m.vertices[t[1]]));
    const int m12 = pool.add(0.5 * (m.vertices[t[1]] + m.vertices[t[2]]));
    const int m20 = pool.add(0.5 * (m.vertices[t[2]] + m.vertices[t[0]]));
    tris.push_back({t[0], m01, m20});
    tris.push_back({m01, t[1], m12});
    tris.push_back({m20, m12, t[2]});
    tris.push_back({m01, m12, m20});
  }
  Mesh r;
  r.vertices = pool.pts;
  r.triangles = tris;
  r.corners = m.corners;
  classify(r);
  return r;
}

Mesh read_mesh(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::vector<int> lineno;
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string w; ss >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    lines.push_back(tok);
    lineno.push_back(no);
  }
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> InputError {
    const int at = pos < lineno.size() ? lineno[pos] : no;
    return InputError("mesh parse error at line " + std::to_string(at) + ": " + msg);
  };
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used != s.size()) throw fail("bad number '" + s + "'");
      return d;
    } catch (const std::logic_error&) {
      throw fail("bad number '" + s + "'");
    }
  };
  auto integer = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size()) throw fail("bad integer '" + s + "'");
      return static_cast<int>(v);
    } catch (const std::logic_error&) {
      throw fail("bad integer '" + s + "'");
    }
  };
  auto section = [&](const char* name) {
    if (pos >= lines.size() || lines[pos].size() != 2 || lines[pos][0] != name)
      throw fail(std::string("expected '") + name + " <count>'");
    const int n = integer(lines[pos][1]);
    if (n < 0) throw fail("negative count");
    ++pos;
    return n;
  };
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "tris2d" || lines[0][1] != "v1")
    throw fail("expected header 'tris2d v1'");
  pos = 1;
  Mesh m;
  const int nv = section("vertices");
  for (int i = 0; i < nv; ++i, ++pos) {
    if (pos >= lines.size() || lines[pos].size() != 2) throw fail("expected 'x y'");
    m.vertices.emplace_back(number(lines[pos][0]), number(lines[pos][1]));
  }
  const int nt = section("triangles");
  for (int i = 0; i < nt; ++i, ++pos) {
    if (pos >= lines.size() || lines[pos].size() != 3) throw fail("expected 'i j k'");
    std::array<int, 3> t{integer(lines[pos][0]), integer(lines[pos][1]), integer(lines[pos][2])};
    for (int v : t)
      if (v < 0 || v >= nv) throw fail("triangle references missing vertex " + std::to_string(v));
    m.triangles.push_back(t);
  }
  const int nc = section("corners");
  for (int i = 0; i < nc; ++i, ++pos) {
    if (pos >= lines.size() || lines[pos].size() != 2) throw fail("expected 'x y'");
    m.corners.emplace_back(number(lines[pos][0]), number(lines[pos][1]));
  }
  if (pos != lines.size()) throw fail("trailing content");
  classify(m);
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open mesh file '" + path + "'");
  return read_mesh(f);
}

void write_mesh(const Mesh& m, std::ostream& out) {
  out << "tris2d v1\n" << std::setprecision(17);
  out << "vertices " << m.nv() << "\n";
  for (const auto& v : m.vertices) out << v.x() << " " << v.y() << "\n";
  out << "triangles " << m.nt() << "\n";
  for (const auto& t : m.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "corners " << m.corners.size() << "\n";
  for (const auto& c : m.corners) out << c.x() << " " << c.y() << "\n";
}

void write_mesh_file(const Mesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write mesh file '" + path + "'");
  write_mesh(m, f);
}

}  // namespace stokes
