#include "stokes/assembly.hpp"

#include <cmath>
#include <map>
#include <string>

#include "stokes/errors.hpp"

namespace stokes {

ElementMatrices element_matrices(const Mesh& mesh, int K, const ReferenceBasisTable& t,
                                 const DofMap& dm, const BodyForce& f) {
  const AffineMap& F = mesh.maps[K];
  if (!(std::abs(F.det) > 0)) throw ConfigurationError("singular element map");
  const double adet = std::abs(F.det);
  const int nv = t.nv(), np = t.np();
  const Eigen::MatrixXd& C = dm.elem[K].C;
  const Eigen::Matrix2d G = F.Jinv * F.Jinv.transpose();

  ElementMatrices em;
  const Eigen::MatrixXd Aref =
      adet * (G(0, 0) * t.stiff_xx + G(0, 1) * (t.stiff_xy + t.stiff_xy.transpose()) +
              G(1, 1) * t.stiff_yy);
  Eigen::MatrixXd As = C * Aref * C.transpose();
  As = 0.5 * (As + As.transpose()).eval();
  em.A.setZero(2 * nv, 2 * nv);
  em.A.topLeftCorner(nv, nv) = As;
  em.A.bottomRightCorner(nv, nv) = As;

  em.B.resize(np, 2 * nv);
  for (int c = 0; c < 2; ++c)
    em.B.middleCols(c * nv, nv) =
        -adet * (F.Jinv(0, c) * t.div_x + F.Jinv(1, c) * t.div_y) * C.transpose();

  em.f.setZero(2 * nv);
  if (f) {
    const int nq = static_cast<int>(t.rule.size());
    Eigen::VectorXd f0(nq), f1(nq);
    for (int q = 0; q < nq; ++q) {
      const Vec2 val = f(F.apply(t.rule.x[q], t.rule.y[q]));
      f0(q) = adet * t.rule.weights[q] * val.x();
      f1(q) = adet * t.rule.weights[q] * val.y();
    }
    em.f.head(nv) = C * (t.v_val * f0);
    em.f.tail(nv) = C * (t.v_val * f1);
  }
  em.M = adet * t.p_mass;
  return em;
}

Eigen::VectorXd interpolate_bc(const DirichletData& g, const Mesh& mesh, const DofMap& dm,
                               const ReferenceBasisTable& /*table*/) {
  const int k = dm.k;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dm.nC);
  if (!g) return out;
  const int npt = k + 1;
  const std::vector<double> gl = gauss_lobatto_nodes(npt);
  static const double vx[3] = {0.0, 1.0, 0.0}, vy[3] = {0.0, 0.0, 1.0};
  // Per constrained velocity DOF: accumulated estimates and their count.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dm.nC);
  std::vector<int> cnt(dm.nC, 0);
  std::map<int, Eigen::Vector2d> vertex_value;  // for the corner consistency check

  Eigen::VectorXd v, gx, gy;
  for (int e = 0; e < mesh.ne(); ++e) {
    const MeshEdge& E = mesh.edges[e];
    if (!E.boundary()) continue;
    const int K = E.elems[0], le = E.local[0];
    const auto& tri = mesh.triangles[K];
    const ElementDofs& ed = dm.elem[K];
    const Vec2 n = mesh.edge_normal(e);
    // Local reference vertices at the low and high ends of the edge.
    const int lo = tri[edge_start(le)] == E.v0 ? edge_start(le) : edge_end(le);
    const int hi = lo == edge_start(le) ? edge_end(le) : edge_start(le);
    std::vector<int> slots{lo, hi};
    for (int endpoint : {lo, hi})
      for (int d = 0; d < 2; ++d) {
        const int slot = c1_local(endpoint, d);
        if (dm.scalars[ed.vscalar[slot]].constrained) slots.push_back(slot);
      }
    for (int l = 0; l < k - 3; ++l) slots.push_back(edge_local(k, le, l));
    if (static_cast<int>(slots.size()) != npt)
      throw ConfigurationError("boundary edge " + std::to_string(e) +
                               " has an unexpected number of trace functions");

    Eigen::MatrixXd V(npt, npt);
    Eigen::MatrixXd rhs(npt, 2);
    for (int i = 0; i < npt; ++i) {
      const double s = 0.5 * (1.0 + gl[i]);
      const double x = (1 - s) * vx[lo] + s * vx[hi], y = (1 - s) * vy[lo] + s * vy[hi];
      eval_velocity_basis(k, x, y, v, gx, gy);
      const Eigen::VectorXd gv = ed.C * v;
      for (int j = 0; j < npt; ++j) V(i, j) = gv(slots[j]);
      const Vec2 p = (1 - s) * mesh.vertices[E.v0] + s * mesh.vertices[E.v1];
      const Vec2 val = g(p, n);
      rhs(i, 0) = val.x();
      rhs(i, 1) = val.y();
    }
    const Eigen::MatrixXd coef = V.partialPivLu().solve(rhs);

    for (int endpoint = 0; endpoint < 2; ++endpoint) {
      const int a = endpoint == 0 ? E.v0 : E.v1;
      const Vec2 val = g(mesh.vertices[a], n);
      auto it = vertex_value.find(a);
      if (it != vertex_value.end()) {
        const double scale = 1.0 + it->second.norm();
        if ((it->second - val).norm() > 1e-10 * scale)
          throw InputError("boundary data is discontinuous at vertex " + std::to_string(a));
      } else {
        vertex_value[a] = val;
      }
    }
    for (int j = 0; j < npt; ++j) {
      const int sc = ed.vscalar[slots[j]];
      for (int c = 0; c < 2; ++c) {
        const int idx = dm.scalar_vel[sc][c] - dm.nE;
        acc(idx) += coef(j, c);
        ++cnt[idx];
      }
    }
  }
  for (int i = 0; i < dm.nC; ++i)
    if (cnt[i] > 0) out(i) = acc(i) / cnt[i];
  return out;
}

PartitionedSystem assemble(const Mesh& mesh, const DofMap& dm, const ReferenceBasisTable& table,
                           const BodyForce& f, const DirichletData& g) {
  if (table.k != dm.k) throw InputError("reference table and numbering use different orders");
  PartitionedSystem sys;
  sys.mesh = &mesh;
  sys.dofmap = &dm;
  sys.table = &table;
  sys.elems.reserve(mesh.nt());
  for (int K = 0; K < mesh.nt(); ++K) sys.elems.push_back(element_matrices(mesh, K, table, dm, f));
  sys.g_constrained = interpolate_bc(g, mesh, dm, table);
  return sys;
}

int full_index_velocity(const DofMap& dm, int v) {
  if (v < dm.nE) return v;
  if (v < dm.nE + dm.nC) return -1;
  return dm.nE + dm.ne + (v - dm.nE - dm.nC);
}

int full_index_pressure(const DofMap& dm, int p) {
  if (p < dm.ne) return dm.nE + p;
  return dm.nE + dm.ne + dm.nI + (p - dm.ne);
}

FullSystem assemble_full(const PartitionedSystem& sys) {
  const DofMap& dm = *sys.dofmap;
  const int nvs = sys.table->nv(), nps = sys.table->np();
  FullSystem fs;
  fs.nE = dm.nE;
  fs.ne = dm.ne;
  fs.nI = dm.nI;
  fs.ni = dm.ni;
  const int n = dm.nE + dm.ne + dm.nI + dm.ni;
  fs.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  for (int K = 0; K < static_cast<int>(sys.elems.size()); ++K) {
    const ElementMatrices& em = sys.elems[K];
    std::vector<int> vi(2 * nvs), vg(2 * nvs), pi(nps);
    for (int l = 0; l < 2 * nvs; ++l) {
      vg[l] = local_velocity_global(dm, K, l, nvs);
      vi[l] = full_index_velocity(dm, vg[l]);
    }
    for (int j = 0; j < nps; ++j) pi[j] = full_index_pressure(dm, dm.elem[K].pdof[j]);
    for (int a = 0; a < 2 * nvs; ++a) {
      if (vi[a] < 0) continue;
      fs.rhs(vi[a]) += em.f(a);
      for (int b = 0; b < 2 * nvs; ++b) {
        if (em.A(a, b) == 0.0) continue;
        if (vi[b] >= 0)
          trip.emplace_back(vi[a], vi[b], em.A(a, b));
        else
          fs.rhs(vi[a]) -= em.A(a, b) * sys.g_constrained(vg[b] - dm.nE);
      }
    }
    for (int j = 0; j < nps; ++j)
      for (int b = 0; b < 2 * nvs; ++b) {
        const double val = em.B(j, b);
        if (val == 0.0) continue;
        if (vi[b] >= 0) {
          trip.emplace_back(pi[j], vi[b], val);
          trip.emplace_back(vi[b], pi[j], val);
        } else {
          fs.rhs(pi[j]) -= val * sys.g_constrained(vg[b] - dm.nE);
        }
      }
  }
  fs.K.resize(n, n);
  fs.K.setFromTriplets(trip.begin(), trip.end());
  return fs;
}

}  // namespace stokes
