#include "stokes/dofmap.hpp"

#include <algorithm>
#include <string>

#include "stokes/errors.hpp"
#include "stokes/refelem.hpp"

namespace stokes {

DofMap build_dofmap(const Mesh& mesh, int k) {
  if (!mesh.classified) throw InputError("mesh must be classified before numbering");
  if (k < kMinOrder || k > kMaxOrder)
    throw CapabilityError("polynomial order " + std::to_string(k) + " is not supported");
  const auto cs = corner_split_check(mesh);
  if (!cs.ok)
    throw ConfigurationError("mesh is not corner-split: element " +
                             std::to_string(cs.offending.front()) +
                             " has more than one boundary edge");
  DofMap dm;
  dm.k = k;
  const int nv = mesh.nv(), nt = mesh.nt(), ned = mesh.ne();
  const int nedge_fn = k - 3, nint = velocity_interior_count(k);

  // Scalar functions.
  dm.vertex_c0.assign(nv, -1);
  dm.vertex_c1.assign(nv, {});
  for (int a = 0; a < nv; ++a) {
    ScalarDof s{VelKind::C0Vertex, a};
    s.constrained = mesh.vclass[a] != VertexClass::Interior;
    dm.vertex_c0[a] = static_cast<int>(dm.scalars.size());
    dm.scalars.push_back(s);
  }
  for (int a = 0; a < nv; ++a) {
    auto push = [&](const Vec2& d, bool constrained, int edge) {
      ScalarDof s{VelKind::C1Vertex, a, static_cast<int>(dm.vertex_c1[a].size()), edge, d,
                  constrained};
      dm.vertex_c1[a].push_back(static_cast<int>(dm.scalars.size()));
      dm.scalars.push_back(s);
    };
    switch (mesh.vclass[a]) {
      case VertexClass::Interior:
        push(Vec2(1, 0), false, -1);
        push(Vec2(0, 1), false, -1);
        break;
      case VertexClass::BoundaryNoncorner: {
        const Vec2 n = mesh.normal[a];
        push(Vec2(-n.y(), n.x()), true, -1);
        push(n, false, -1);
        break;
      }
      case VertexClass::Corner: {
        auto edges = mesh.vert_edges[a];
        std::sort(edges.begin(), edges.end());
        for (int e : edges) push(mesh.edge_tangent(e), mesh.edges[e].boundary(), e);
        break;
      }
    }
  }
  std::vector<int> edge_first(ned);
  for (int e = 0; e < ned; ++e) {
    edge_first[e] = static_cast<int>(dm.scalars.size());
    for (int l = 0; l < nedge_fn; ++l) {
      ScalarDof s{VelKind::Edge, e, l};
      s.constrained = mesh.edges[e].boundary();
      dm.scalars.push_back(s);
    }
  }
  std::vector<int> int_first(nt);
  for (int K = 0; K < nt; ++K) {
    int_first[K] = static_cast<int>(dm.scalars.size());
    for (int l = 0; l < nint; ++l) dm.scalars.push_back({VelKind::Interior, K, l});
  }

  // Velocity numbering.
  dm.scalar_vel.assign(dm.scalars.size(), {-1, -1});
  auto number = [&](int s) {
    for (int c = 0; c < 2; ++c) {
      dm.scalar_vel[s][c] = static_cast<int>(dm.vdofs.size());
      dm.vdofs.push_back({s, c});
    }
  };
  dm.c0_block.start = 0;
  for (int a = 0; a < nv; ++a)
    if (!dm.scalars[dm.vertex_c0[a]].constrained) number(dm.vertex_c0[a]);
  dm.c0_block.size = static_cast<int>(dm.vdofs.size());
  for (int a = 0; a < nv; ++a)
    for (int s : dm.vertex_c1[a])
      if (!dm.scalars[s].constrained) {
        dm.c1_blocks.push_back({static_cast<int>(dm.vdofs.size()), 2});
        number(s);
      }
  for (int e = 0; e < ned; ++e) {
    if (mesh.edges[e].boundary() || nedge_fn == 0) continue;
    dm.edge_blocks.push_back({static_cast<int>(dm.vdofs.size()), 2 * nedge_fn});
    for (int l = 0; l < nedge_fn; ++l) number(edge_first[e] + l);
  }
  dm.nE = static_cast<int>(dm.vdofs.size());
  for (std::size_t s = 0; s < dm.scalars.size(); ++s)
    if (dm.scalars[s].constrained) number(static_cast<int>(s));
  dm.nC = static_cast<int>(dm.vdofs.size()) - dm.nE;
  for (int K = 0; K < nt; ++K)
    for (int l = 0; l < nint; ++l) number(int_first[K] + l);
  dm.nI = static_cast<int>(dm.vdofs.size()) - dm.nE - dm.nC;

  // Pressure numbering.
  dm.vertex_pressure.assign(nv, {});
  for (int a = 0; a < nv; ++a) {
    if (mesh.vclass[a] == VertexClass::Corner) {
      auto elems = mesh.vert_elems[a];
      std::sort(elems.begin(), elems.end());
      for (int K : elems) {
        dm.vertex_pressure[a].push_back(static_cast<int>(dm.pdofs.size()));
        dm.pdofs.push_back({PresKind::Vertex, a, K, 0});
      }
    } else {
      dm.vertex_pressure[a].push_back(static_cast<int>(dm.pdofs.size()));
      dm.pdofs.push_back({PresKind::Vertex, a, -1, 0});
    }
  }
  dm.n_pvertex = static_cast<int>(dm.pdofs.size());
  for (int K = 0; K < nt; ++K) dm.pdofs.push_back({PresKind::Average, -1, K, 0});
  dm.ne = static_cast<int>(dm.pdofs.size());
  const int npi = pressure_interior_count(k);
  for (int K = 0; K < nt; ++K)
    for (int l = 0; l < npi; ++l) dm.pdofs.push_back({PresKind::Interior, -1, K, l});
  dm.ni = static_cast<int>(dm.pdofs.size()) - dm.ne;

  // Element maps.
  const int nvs = velocity_count(k), nps = pressure_count(k);
  dm.elem.resize(nt);
  for (int K = 0; K < nt; ++K) {
    ElementDofs& ed = dm.elem[K];
    ed.vscalar.assign(nvs, -1);
    ed.C = Eigen::MatrixXd::Identity(nvs, nvs);
    const auto& tri = mesh.triangles[K];
    const AffineMap& F = mesh.maps[K];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i];
      ed.vscalar[i] = dm.vertex_c0[a];
      int s1, s2;
      if (mesh.vclass[a] == VertexClass::Corner) {
        // The element's two edges at a, in local order.
        const int g1 = mesh.tri_edges[K][(i + 1) % 3], g2 = mesh.tri_edges[K][(i + 2) % 3];
        s1 = s2 = -1;
        for (int s : dm.vertex_c1[a]) {
          if (dm.scalars[s].dir_edge == g1) s1 = s;
          if (dm.scalars[s].dir_edge == g2) s2 = s;
        }
      } else {
        s1 = dm.vertex_c1[a][0];
        s2 = dm.vertex_c1[a][1];
      }
      Eigen::Matrix2d M;
      M.col(0) = dm.scalars[s1].dir;
      M.col(1) = dm.scalars[s2].dir;
      const Eigen::Matrix2d R = M.inverse() * F.J;
      ed.vscalar[c1_local(i, 0)] = s1;
      ed.vscalar[c1_local(i, 1)] = s2;
      for (int r = 0; r < 2; ++r)
        for (int d = 0; d < 2; ++d) ed.C(c1_local(i, r), c1_local(i, d)) = R(r, d);
    }
    for (int e = 0; e < 3; ++e) {
      const int g = mesh.tri_edges[K][e];
      const bool forward = tri[edge_end(e)] == mesh.edges[g].v1;
      for (int l = 0; l < nedge_fn; ++l) {
        const int slot = edge_local(k, e, l);
        ed.vscalar[slot] = edge_first[g] + l;
        ed.C(slot, slot) = (forward || l % 2 == 0) ? 1.0 : -1.0;
      }
    }
    for (int l = 0; l < nint; ++l) ed.vscalar[velocity_exterior_count(k) + l] = int_first[K] + l;

    ed.pdof.assign(nps, -1);
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i];
      if (mesh.vclass[a] == VertexClass::Corner) {
        for (int p : dm.vertex_pressure[a])
          if (dm.pdofs[p].elem == K) ed.pdof[i] = p;
      } else {
        ed.pdof[i] = dm.vertex_pressure[a][0];
      }
    }
    ed.pdof[3] = dm.n_pvertex + K;
    for (int l = 0; l < npi; ++l) ed.pdof[4 + l] = dm.ne + K * npi + l;
  }
  dm.patch_area = patch_areas(dm, mesh);
  return dm;
}

V0Mask v0_mask(const DofMap& dm) {
  V0Mask m;
  m.constrained.resize(dm.vdofs.size());
  for (std::size_t v = 0; v < dm.vdofs.size(); ++v)
    m.constrained[v] = dm.scalars[dm.vdofs[v].scalar].constrained;
  return m;
}

std::vector<double> patch_areas(const DofMap& dm, const Mesh& mesh) {
  std::vector<double> out(dm.n_pvertex, 0.0);
  for (int p = 0; p < dm.n_pvertex; ++p) {
    const PressureDof& d = dm.pdofs[p];
    if (d.elem >= 0) {
      out[p] = mesh.area(d.elem);
    } else {
      for (int K : mesh.vert_elems[d.vertex]) out[p] += mesh.area(K);
    }
  }
  return out;
}

}  // namespace stokes
