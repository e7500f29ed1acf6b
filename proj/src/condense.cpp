#include "stokes/condense.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "stokes/errors.hpp"

namespace stokes {

void InteriorSaddle::factor(const Eigen::MatrixXd& Aii, const Eigen::MatrixXd& Bii) {
  nu = static_cast<int>(Aii.rows());
  np = static_cast<int>(Bii.rows());
  A.compute(Aii);
  if (A.info() != Eigen::Success)
    throw ConfigurationError("interior velocity block is not positive definite");
  B = Bii;
  AinvBt = A.solve(Bii.transpose());
  S.compute(Bii * AinvBt);
  if (S.info() != Eigen::Success)
    throw ConfigurationError("interior saddle block is singular");
  // A rank-deficient divergence shows up as a tiny pivot rather than a failure.
  const Eigen::VectorXd d = S.matrixL().toDenseMatrix().diagonal();
  if (np > 0 && d.minCoeff() <= 1e-7 * d.maxCoeff())
    throw ConfigurationError("interior saddle block is numerically singular");
}

Eigen::MatrixXd InteriorSaddle::solve(const Eigen::MatrixXd& rhs) const {
  const Eigen::MatrixXd r = rhs.topRows(nu), s = rhs.bottomRows(np);
  const Eigen::MatrixXd Ar = A.solve(r);
  const Eigen::MatrixXd y = S.solve(B * Ar - s);
  Eigen::MatrixXd out(nu + np, rhs.cols());
  out.topRows(nu) = Ar - AinvBt * y;
  out.bottomRows(np) = y;
  return out;
}

SpMat CondensedSystem::schur() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A.nonZeros() + 2 * B.nonZeros());
  for (int j = 0; j < A.outerSize(); ++j)
    for (SpMat::InnerIterator it(A, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < B.outerSize(); ++j)
    for (SpMat::InnerIterator it(B, j); it; ++it) {
      t.emplace_back(nE + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nE + it.row(), it.value());
    }
  SpMat S(size(), size());
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

Eigen::VectorXd CondensedSystem::rhs() const {
  Eigen::VectorXd r(size());
  r << f_star, g_star;
  return r;
}

Eigen::VectorXd CondensedSystem::null_vector() const {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(size());
  z.tail(ne).setOnes();
  return z;
}

Eigen::VectorXd CondensedSystem::pressure_integral_weights() const {
  const DofMap& dm = *sys->dofmap;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(size());
  for (int K = 0; K < sys->mesh->nt(); ++K) w(nE + dm.n_pvertex + K) = sys->mesh->area(K);
  return w;
}

CondensedSystem condense(const PartitionedSystem& sys) {
  const DofMap& dm = *sys.dofmap;
  const int k = dm.k;
  const int nvs = velocity_count(k), nps = pressure_count(k);
  const int next_s = velocity_exterior_count(k);
  CondensedSystem cs;
  cs.sys = &sys;
  cs.nE = dm.nE;
  cs.ne = dm.ne;
  cs.f_star = Eigen::VectorXd::Zero(dm.nE);
  cs.g_star = Eigen::VectorXd::Zero(dm.ne);
  const int nt = static_cast<int>(sys.elems.size());
  cs.elems.resize(nt);

  std::vector<Eigen::Triplet<double>> ta, tb, tc, tm;
  for (int K = 0; K < nt; ++K) {
    const ElementMatrices& em = sys.elems[K];
    ElementCondensation& ec = cs.elems[K];
    const int nloc = 2 * nvs + nps;
    Eigen::MatrixXd Kl = Eigen::MatrixXd::Zero(nloc, nloc);
    Kl.topLeftCorner(2 * nvs, 2 * nvs) = em.A;
    Kl.bottomLeftCorner(nps, 2 * nvs) = em.B;
    Kl.topRightCorner(2 * nvs, nps) = em.B.transpose();
    Eigen::VectorXd Fl = Eigen::VectorXd::Zero(nloc);
    Fl.head(2 * nvs) = em.f;

    std::vector<int> in_v, in_p;
    for (int c = 0; c < 2; ++c)
      for (int s = 0; s < nvs; ++s) (s < next_s ? ec.ext : in_v).push_back(c * nvs + s);
    for (int j = 0; j < nps; ++j) (j < 4 ? ec.ext : in_p).push_back(2 * nvs + j);
    ec.in = in_v;
    ec.in.insert(ec.in.end(), in_p.begin(), in_p.end());
    const int nx = static_cast<int>(ec.ext.size()), ni = static_cast<int>(ec.in.size());

    Eigen::MatrixXd KEE(nx, nx), KIE(ni, nx), KII(ni, ni);
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < nx; ++b) KEE(a, b) = Kl(ec.ext[a], ec.ext[b]);
    for (int a = 0; a < ni; ++a) {
      for (int b = 0; b < nx; ++b) KIE(a, b) = Kl(ec.in[a], ec.ext[b]);
      for (int b = 0; b < ni; ++b) KII(a, b) = Kl(ec.in[a], ec.in[b]);
    }
    const int nu = static_cast<int>(in_v.size()), npi = static_cast<int>(in_p.size());
    ec.Z.factor(KII.topLeftCorner(nu, nu), KII.bottomLeftCorner(npi, nu));
    ec.K_IE = KIE;
    ec.r_I.resize(ni);
    for (int a = 0; a < ni; ++a) ec.r_I(a) = Fl(ec.in[a]);
    const Eigen::MatrixXd ZK = ec.Z.solve(KIE);
    ec.S = KEE - KIE.transpose() * ZK;
    ec.S = 0.5 * (ec.S + ec.S.transpose()).eval();
    Eigen::VectorXd FE(nx);
    for (int a = 0; a < nx; ++a) FE(a) = Fl(ec.ext[a]);
    ec.F = FE - KIE.transpose() * ec.Z.solve(ec.r_I);
    cs.setup_flops += static_cast<double>(nu) * nu * nu / 3.0 +
                      2.0 * nu * nu * npi + static_cast<double>(npi) * npi * npi / 3.0 +
                      4.0 * static_cast<double>(ni) * ni * nx + 2.0 * ni * nx * nx;

    ec.ext_iface.resize(nx);
    for (int a = 0; a < nx; ++a) {
      const int l = ec.ext[a];
      if (l < 2 * nvs) {
        const int v = local_velocity_global(dm, K, l, nvs);
        ec.ext_iface[a] = v < dm.nE ? v : -1 - (v - dm.nE);
      } else {
        ec.ext_iface[a] = dm.nE + dm.elem[K].pdof[l - 2 * nvs];
      }
    }
    for (int a = 0; a < nx; ++a) {
      const int r = ec.ext_iface[a];
      if (r < 0) continue;
      if (r < dm.nE)
        cs.f_star(r) += ec.F(a);
      else
        cs.g_star(r - dm.nE) += ec.F(a);
      for (int b = 0; b < nx; ++b) {
        const int c = ec.ext_iface[b];
        const double v = ec.S(a, b);
        if (c < 0) {
          const double g = sys.g_constrained(-1 - c);
          if (r < dm.nE)
            cs.f_star(r) -= v * g;
          else
            cs.g_star(r - dm.nE) -= v * g;
          continue;
        }
        if (r < dm.nE && c < dm.nE)
          ta.emplace_back(r, c, v);
        else if (r >= dm.nE && c < dm.nE)
          tb.emplace_back(r - dm.nE, c, v);
        else if (r >= dm.nE && c >= dm.nE)
          tc.emplace_back(r - dm.nE, c - dm.nE, v);
      }
    }

    // Projected exterior pressure mass.
    const Eigen::MatrixXd& M = em.M;
    const Eigen::MatrixXd Mee = M.topLeftCorner(4, 4);
    const Eigen::MatrixXd Mie = M.bottomLeftCorner(nps - 4, 4);
    const Eigen::MatrixXd Mii = M.bottomRightCorner(nps - 4, nps - 4);
    const Eigen::MatrixXd Mt = Mee - Mie.transpose() * Mii.llt().solve(Mie);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) tm.emplace_back(dm.elem[K].pdof[a], dm.elem[K].pdof[b], Mt(a, b));
  }
  cs.A.resize(dm.nE, dm.nE);
  cs.A.setFromTriplets(ta.begin(), ta.end());
  cs.B.resize(dm.ne, dm.nE);
  cs.B.setFromTriplets(tb.begin(), tb.end());
  cs.C.resize(dm.ne, dm.ne);
  cs.C.setFromTriplets(tc.begin(), tc.end());
  cs.M.resize(dm.ne, dm.ne);
  cs.M.setFromTriplets(tm.begin(), tm.end());
  return cs;
}

FullSolution back_substitute(const CondensedSystem& cs, const Eigen::VectorXd& iface) {
  const PartitionedSystem& sys = *cs.sys;
  const DofMap& dm = *sys.dofmap;
  const int nvs = velocity_count(dm.k);
  FullSolution sol;
  sol.u = Eigen::VectorXd::Zero(dm.nvel());
  sol.p = Eigen::VectorXd::Zero(dm.npres());
  sol.u.head(dm.nE) = iface.head(dm.nE);
  sol.u.segment(dm.nE, dm.nC) = sys.g_constrained;
  sol.p.head(dm.ne) = iface.tail(dm.ne);
  for (int K = 0; K < static_cast<int>(cs.elems.size()); ++K) {
    const ElementCondensation& ec = cs.elems[K];
    const int nx = static_cast<int>(ec.ext.size());
    Eigen::VectorXd xe(nx);
    for (int a = 0; a < nx; ++a) {
      const int r = ec.ext_iface[a];
      xe(a) = r >= 0 ? iface(r) : sys.g_constrained(-1 - r);
    }
    const Eigen::VectorXd xi = ec.Z.solve(ec.r_I - ec.K_IE * xe);
    for (std::size_t a = 0; a < ec.in.size(); ++a) {
      const int l = ec.in[a];
      if (l < 2 * nvs)
        sol.u(local_velocity_global(dm, K, l, nvs)) = xi(a);
      else
        sol.p(dm.elem[K].pdof[l - 2 * nvs]) = xi(a);
    }
  }
  return sol;
}

SpMat exterior_pressure_mass(const CondensedSystem& cond) { return cond.M; }

void normalize_pressure_mean(const CondensedSystem& cond, Eigen::VectorXd& iface) {
  const Eigen::VectorXd w = cond.pressure_integral_weights();
  const double mean = w.dot(iface) / w.sum();
  iface.tail(cond.ne).array() -= mean;
}

Eigen::VectorXd solve_interface_direct(const CondensedSystem& cond) {
  const SpMat S = cond.schur();
  const int n = cond.size();
  // Symmetric diagonal scaling; without it the pressure rows of tiny elements
  // are resolved only to an absolute, not a relative, accuracy.
  Eigen::VectorXd d(n);
  for (int i = 0; i < cond.nE; ++i) d(i) = 1.0 / std::sqrt(cond.A.coeff(i, i));
  for (int i = 0; i < cond.ne; ++i) d(cond.nE + i) = 1.0 / std::sqrt(cond.M.coeff(i, i));
  const Eigen::VectorXd w = cond.pressure_integral_weights().cwiseProduct(d);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(S.nonZeros() + 2 * cond.ne);
  for (int j = 0; j < S.outerSize(); ++j)
    for (SpMat::InnerIterator it(S, j); it; ++it)
      t.emplace_back(it.row(), it.col(), d(it.row()) * it.value() * d(it.col()));
  for (int i = 0; i < n; ++i)
    if (w(i) != 0.0) {
      t.emplace_back(n, i, w(i));
      t.emplace_back(i, n, w(i));
    }
  SpMat Sb(n + 1, n + 1);
  Sb.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(Sb);
  if (lu.info() != Eigen::Success) throw ConfigurationError("interface system factorization failed");
  Eigen::VectorXd rhs(n + 1);
  rhs << d.cwiseProduct(cond.rhs()), 0.0;
  Eigen::VectorXd y = lu.solve(rhs);
  for (int step = 0; step < 2; ++step) y += lu.solve(rhs - Sb * y);
  return d.cwiseProduct(y.head(n));
}

}  // namespace stokes
