#include "stokes/fields.hpp"

#include <cmath>

namespace stokes {

Eigen::VectorXd local_velocity(const PartitionedSystem& sys, int K, const Eigen::VectorXd& u) {
  const int nvs = sys.table->nv();
  Eigen::VectorXd out(2 * nvs);
  for (int l = 0; l < 2 * nvs; ++l) out(l) = u(local_velocity_global(*sys.dofmap, K, l, nvs));
  return out;
}

Eigen::VectorXd local_pressure(const PartitionedSystem& sys, int K, const Eigen::VectorXd& p) {
  const auto& pd = sys.dofmap->elem[K].pdof;
  Eigen::VectorXd out(pd.size());
  for (std::size_t j = 0; j < pd.size(); ++j) out(j) = p(pd[j]);
  return out;
}

std::vector<FieldSample> sample_fields(const PartitionedSystem& sys, const FullSolution& sol) {
  const ReferenceBasisTable& t = *sys.table;
  const Mesh& mesh = *sys.mesh;
  const int nvs = t.nv(), nq = static_cast<int>(t.rule.size());
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(mesh.nt()) * nq);
  for (int K = 0; K < mesh.nt(); ++K) {
    const AffineMap& F = mesh.maps[K];
    const Eigen::MatrixXd& C = sys.dofmap->elem[K].C;
    const Eigen::VectorXd ul = local_velocity(sys, K, sol.u);
    // Coefficients with respect to the reference basis.
    const Eigen::VectorXd r0 = C.transpose() * ul.head(nvs);
    const Eigen::VectorXd r1 = C.transpose() * ul.tail(nvs);
    const Eigen::VectorXd pl = local_pressure(sys, K, sol.p);
    const Eigen::VectorXd u0 = t.v_val.transpose() * r0, u1 = t.v_val.transpose() * r1;
    const Eigen::VectorXd u0x = t.v_dx.transpose() * r0, u0y = t.v_dy.transpose() * r0;
    const Eigen::VectorXd u1x = t.v_dx.transpose() * r1, u1y = t.v_dy.transpose() * r1;
    const Eigen::VectorXd pv = t.p_val.transpose() * pl;
    for (int q = 0; q < nq; ++q) {
      FieldSample s;
      s.elem = K;
      const Vec2 x = F.apply(t.rule.x[q], t.rule.y[q]);
      s.x = x.x();
      s.y = x.y();
      s.u1 = u0(q);
      s.u2 = u1(q);
      s.p = pv(q);
      // d/dx_c = sum_a Jinv(a, c) d/dxhat_a
      const double du1dx = F.Jinv(0, 0) * u0x(q) + F.Jinv(1, 0) * u0y(q);
      const double du2dy = F.Jinv(0, 1) * u1x(q) + F.Jinv(1, 1) * u1y(q);
      s.div = du1dx + du2dy;
      out.push_back(s);
    }
  }
  return out;
}

double h1_seminorm(const PartitionedSystem& sys, const Eigen::VectorXd& u) {
  double e = 0.0;
  for (int K = 0; K < static_cast<int>(sys.elems.size()); ++K) {
    const Eigen::VectorXd ul = local_velocity(sys, K, u);
    e += ul.dot(sys.elems[K].A * ul);
  }
  return std::sqrt(std::max(e, 0.0));
}

}  // namespace stokes
