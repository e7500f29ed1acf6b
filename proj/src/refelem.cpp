#include "stokes/refelem.hpp"

#include <string>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

void check_order(int k) {
  if (k < kMinOrder || k > kMaxOrder)
    throw CapabilityError("polynomial order " + std::to_string(k) + " outside supported range [" +
                          std::to_string(kMinOrder) + ", " + std::to_string(kMaxOrder) + "]");
}

bool is_vertex_index(const MultiIndex& a, int m) { return a.a1 == m || a.a2 == m || a.a3 == m; }

// Barycentric partials (f1, f2, f3) -> Cartesian gradient on the reference triangle.
inline void to_cartesian(double f1, double f2, double f3, double& gx, double& gy) {
  gx = f2 - f1;
  gy = f3 - f1;
}

// Matrices correcting the permuted J functions so that their gradients at the
// vertex are the Cartesian unit vectors.
constexpr double kC1Fix[3][2][2] = {{{1, 0}, {0, 1}}, {{-1, -1}, {1, 0}}, {{0, 1}, {-1, -1}}};

}  // namespace

std::vector<BasisRole> velocity_roles(int k) {
  check_order(k);
  std::vector<BasisRole> r;
  for (int i = 0; i < 3; ++i) r.push_back({RoleKind::VelC0Vertex, i, 0, {}});
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 2; ++d) r.push_back({RoleKind::VelC1Vertex, i, d, {}});
  for (int e = 0; e < 3; ++e)
    for (int l = 0; l <= k - 4; ++l) r.push_back({RoleKind::VelEdge, e, l, {}});
  int c = 0;
  for (const auto& a : multi_indices(k - 3)) r.push_back({RoleKind::VelInterior, c++, 0, a});
  return r;
}

std::vector<BasisRole> pressure_roles(int k) {
  check_order(k);
  const int m = k - 1;
  std::vector<BasisRole> r;
  for (int i = 0; i < 3; ++i) r.push_back({RoleKind::PressureVertex, i, 0, {}});
  r.push_back({RoleKind::PressureAverage, 0, 0, {}});
  const auto idx = multi_indices(m);
  bool first = true;
  int c = 0;
  for (const auto& a : idx) {
    if (is_vertex_index(a, m)) continue;
    if (first) {  // beta, the fixed reference index
      first = false;
      continue;
    }
    r.push_back({RoleKind::PressureInterior, c++, 0, a});
  }
  return r;
}

void eval_velocity_basis(int k, double x, double y, Eigen::VectorXd& val, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dy) {
  check_order(k);
  const int n = velocity_count(k);
  val.setZero(n);
  dx.setZero(n);
  dy.setZero(n);
  const double L[3] = {1.0 - x - y, x, y};

  for (int i = 0; i < 3; ++i) {
    const double l = L[i];
    double f[3] = {0, 0, 0};
    f[i] = 6.0 * l - 6.0 * l * l;
    val(i) = l * l * (3.0 - 2.0 * l);
    to_cartesian(f[0], f[1], f[2], dx(i), dy(i));
  }

  const int nj = k - 3;
  const double pm1 = jacobi33_at_minus1(nj);
  for (int i = 0; i < 3; ++i) {
    const int p = (i + 1) % 3, q = (i + 2) % 3;
    double jv[2], jx[2], jy[2];
    const int other[2] = {p, q};
    for (int c = 0; c < 2; ++c) {
      const int o = other[c];
      const double t = L[o] - L[i];
      const double P = jacobi33_eval(nj, t), dP = jacobi33_deriv(nj, t);
      const double li2 = L[i] * L[i];
      jv[c] = li2 * L[o] * P / pm1;
      double f[3] = {0, 0, 0};
      f[i] = (2.0 * L[i] * L[o] * P - li2 * L[o] * dP) / pm1;
      f[o] = (li2 * P + li2 * L[o] * dP) / pm1;
      to_cartesian(f[0], f[1], f[2], jx[c], jy[c]);
    }
    for (int d = 0; d < 2; ++d) {
      const int s = c1_local(i, d);
      const double a = kC1Fix[i][d][0], b = kC1Fix[i][d][1];
      val(s) = a * jv[0] + b * jv[1];
      dx(s) = a * jx[0] + b * jx[1];
      dy(s) = a * jy[0] + b * jy[1];
    }
  }

  for (int e = 0; e < 3; ++e) {
    const int i = edge_start(e), j = edge_end(e);
    const double t = L[j] - L[i];
    const double bi = L[i] * L[i], bj = L[j] * L[j];
    for (int l = 0; l <= k - 4; ++l) {
      const int s = edge_local(k, e, l);
      const double r = legendre_eval(l, t), dr = legendre_deriv(l, t);
      val(s) = bi * bj * r;
      double f[3] = {0, 0, 0};
      f[i] = 2.0 * L[i] * bj * r - bi * bj * dr;
      f[j] = 2.0 * bi * L[j] * r + bi * bj * dr;
      to_cartesian(f[0], f[1], f[2], dx(s), dy(s));
    }
  }

  const double bub = L[0] * L[1] * L[2];
  const double bx = L[0] * L[2] - L[1] * L[2];
  const double by = L[0] * L[1] - L[1] * L[2];
  const BarycentricPoint bp{L[0], L[1], L[2]};
  int s = velocity_exterior_count(k);
  for (const auto& a : multi_indices(k - 3)) {
    const double b = bernstein_eval(k - 3, a, bp);
    const auto g = bernstein_grad(k - 3, a, bp);
    val(s) = bub * b;
    dx(s) = bx * b + bub * g[0];
    dy(s) = by * b + bub * g[1];
    ++s;
  }
}

void eval_pressure_basis(int k, double x, double y, Eigen::VectorXd& val, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dy) {
  check_order(k);
  const int m = k - 1;
  const int n = pressure_count(k);
  val.setZero(n);
  dx.setZero(n);
  dy.setZero(n);
  const BarycentricPoint bp{1.0 - x - y, x, y};
  const auto idx = multi_indices(m);
  // Vertex Bernstein values and the reference index beta.
  double bv[3] = {0, 0, 0}, bgx[3] = {0, 0, 0}, bgy[3] = {0, 0, 0};
  double beta_v = 0, beta_x = 0, beta_y = 0;
  bool have_beta = false;
  int s = 4;
  for (const auto& a : idx) {
    const double b = bernstein_eval(m, a, bp);
    const auto g = bernstein_grad(m, a, bp);
    if (is_vertex_index(a, m)) {
      const int v = a.a1 == m ? 0 : (a.a2 == m ? 1 : 2);
      bv[v] = b;
      bgx[v] = g[0];
      bgy[v] = g[1];
    } else if (!have_beta) {
      have_beta = true;
      beta_v = b;
      beta_x = g[0];
      beta_y = g[1];
    } else {
      val(s) = b;
      dx(s) = g[0];
      dy(s) = g[1];
      ++s;
    }
  }
  for (int t = 4; t < n; ++t) {
    val(t) -= beta_v;
    dx(t) -= beta_x;
    dy(t) -= beta_y;
  }
  val(3) = 1.0;
  for (int i = 0; i < 3; ++i) {
    val(i) = bv[i] - beta_v;
    dx(i) = bgx[i] - beta_x;
    dy(i) = bgy[i] - beta_y;
    val(3) -= val(i);
    dx(3) -= dx(i);
    dy(3) -= dy(i);
  }
}

void build_pressure_basis(int k, const QuadratureRule& rule, ReferenceBasisTable& t) {
  check_order(k);
  t.k = k;
  t.p_roles = pressure_roles(k);
  const int n = pressure_count(k), nq = static_cast<int>(rule.size());
  t.p_val.resize(n, nq);
  t.p_dx.resize(n, nq);
  t.p_dy.resize(n, nq);
  Eigen::VectorXd v, gx, gy;
  for (int q = 0; q < nq; ++q) {
    eval_pressure_basis(k, rule.x[q], rule.y[q], v, gx, gy);
    t.p_val.col(q) = v;
    t.p_dx.col(q) = gx;
    t.p_dy.col(q) = gy;
  }
}

void build_velocity_basis(int k, const QuadratureRule& rule, ReferenceBasisTable& t) {
  check_order(k);
  t.k = k;
  t.v_roles = velocity_roles(k);
  const int n = velocity_count(k), nq = static_cast<int>(rule.size());
  t.v_val.resize(n, nq);
  t.v_dx.resize(n, nq);
  t.v_dy.resize(n, nq);
  Eigen::VectorXd v, gx, gy;
  for (int q = 0; q < nq; ++q) {
    eval_velocity_basis(k, rule.x[q], rule.y[q], v, gx, gy);
    t.v_val.col(q) = v;
    t.v_dx.col(q) = gx;
    t.v_dy.col(q) = gy;
  }
}

ReferenceBasisTable build_reference_table(int k) {
  check_order(k);
  ReferenceBasisTable t;
  t.rule = triangle_quadrature(2 * k + 2);
  build_pressure_basis(k, t.rule, t);
  build_velocity_basis(k, t.rule, t);
  const Eigen::Map<const Eigen::VectorXd> w(t.rule.weights.data(),
                                            static_cast<Eigen::Index>(t.rule.size()));
  const Eigen::MatrixXd vdxw = t.v_dx * w.asDiagonal();
  const Eigen::MatrixXd vdyw = t.v_dy * w.asDiagonal();
  const Eigen::MatrixXd pw = t.p_val * w.asDiagonal();
  t.stiff_xx = vdxw * t.v_dx.transpose();
  t.stiff_xy = vdxw * t.v_dy.transpose();
  t.stiff_yy = vdyw * t.v_dy.transpose();
  t.div_x = pw * t.v_dx.transpose();
  t.div_y = pw * t.v_dy.transpose();
  t.p_mass = pw * t.p_val.transpose();
  t.v_mass = t.v_val * w.asDiagonal() * t.v_val.transpose();
  return t;
}

EdgeTrace edge_trace(const ReferenceBasisTable& table, int edge, int npts) {
  if (edge < 0 || edge > 2) throw InputError("reference edge index must be 0, 1 or 2");
  if (npts < 1) throw InputError("edge trace needs at least one point");
  const Rule1D g = gauss_jacobi(npts, 0.0, 0.0);
  static const double vx[3] = {0.0, 1.0, 0.0}, vy[3] = {0.0, 0.0, 1.0};
  const int a = edge_start(edge), b = edge_end(edge);
  EdgeTrace tr;
  tr.values.resize(table.nv(), npts);
  Eigen::VectorXd v, gx, gy;
  for (int i = 0; i < npts; ++i) {
    const double s = 0.5 * (1.0 + g.nodes[i]);
    tr.t.push_back(s);
    eval_velocity_basis(table.k, (1 - s) * vx[a] + s * vx[b], (1 - s) * vy[a] + s * vy[b], v, gx,
                        gy);
    tr.values.col(i) = v;
  }
  return tr;
}

}  // namespace stokes
