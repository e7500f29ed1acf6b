#include "stokes/polyquad.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stokes/errors.hpp"

namespace stokes {

double jacobi_eval(int n, double a, double b, double t) {
  if (n < 0) return 0.0;
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 0.5 * ((a + b + 2.0) * t + (a - b));
  for (int m = 1; m < n; ++m) {
    const double s = 2.0 * m + a + b;
    const double c1 = 2.0 * (m + 1) * (m + a + b + 1) * s;
    const double c2 = (s + 1.0) * ((s + 2.0) * s * t + a * a - b * b);
    const double c3 = 2.0 * (m + a) * (m + b) * (s + 2.0);
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi_deriv(int n, double a, double b, double t) {
  if (n <= 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi_eval(n - 1, a + 1.0, b + 1.0, t);
}

double jacobi33_eval(int n, double t) { return jacobi_eval(n, 3.0, 3.0, t); }
double jacobi33_deriv(int n, double t) { return jacobi_deriv(n, 3.0, 3.0, t); }

double jacobi33_at_minus1(int n) {
  // (-1)^n * binom(n+3, 3)
  const double c = (n + 1.0) * (n + 2.0) * (n + 3.0) / 6.0;
  return (n % 2 == 0) ? c : -c;
}

double legendre_eval(int n, double t) { return jacobi_eval(n, 0.0, 0.0, t); }
double legendre_deriv(int n, double t) { return jacobi_deriv(n, 0.0, 0.0, t); }

std::vector<MultiIndex> multi_indices(int k) {
  std::vector<MultiIndex> out;
  for (int a1 = 0; a1 <= k; ++a1)
    for (int a2 = 0; a2 <= k - a1; ++a2) out.push_back({a1, a2, k - a1 - a2});
  return out;
}

namespace {

double multinomial(int k, const MultiIndex& al) {
  return std::exp(std::lgamma(k + 1.0) - std::lgamma(al.a1 + 1.0) - std::lgamma(al.a2 + 1.0) -
                  std::lgamma(al.a3 + 1.0));
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void check_index(int k, const MultiIndex& al) {
  if (al.a1 < 0 || al.a2 < 0 || al.a3 < 0 || al.order() != k)
    throw InputError("Bernstein multi-index order does not match degree");
}

}  // namespace

double bernstein_eval(int k, const MultiIndex& al, const BarycentricPoint& p) {
  check_index(k, al);
  return std::round(multinomial(k, al)) * ipow(p.l1, al.a1) * ipow(p.l2, al.a2) * ipow(p.l3, al.a3);
}

std::array<double, 2> bernstein_grad(int k, const MultiIndex& al, const BarycentricPoint& p) {
  check_index(k, al);
  const double c = std::round(multinomial(k, al));
  const double f1 = ipow(p.l1, al.a1), f2 = ipow(p.l2, al.a2), f3 = ipow(p.l3, al.a3);
  const double d1 = al.a1 > 0 ? al.a1 * ipow(p.l1, al.a1 - 1) * f2 * f3 : 0.0;
  const double d2 = al.a2 > 0 ? al.a2 * f1 * ipow(p.l2, al.a2 - 1) * f3 : 0.0;
  const double d3 = al.a3 > 0 ? al.a3 * f1 * f2 * ipow(p.l3, al.a3 - 1) : 0.0;
  // grad l1 = (-1,-1), grad l2 = (1,0), grad l3 = (0,1)
  return {c * (d2 - d1), c * (d3 - d1)};
}

Rule1D gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw InputError("Gauss-Jacobi rule needs at least one node");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * i + a + b;
    diag(i) = (i == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 * i + a + b;
    double beta = 4.0 * i * (i + a) * (i + b) * (i + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub(i - 1) = std::sqrt(beta);
  }
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  if (n == 1) {
    r.nodes[0] = diag(0);
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v * v;
  }
  return r;
}

std::vector<double> gauss_lobatto_nodes(int n) {
  if (n < 2) throw InputError("Gauss-Lobatto rule needs at least two nodes");
  std::vector<double> x{-1.0};
  if (n > 2) {
    const Rule1D inner = gauss_jacobi(n - 2, 1.0, 1.0);
    x.insert(x.end(), inner.nodes.begin(), inner.nodes.end());
  }
  x.push_back(1.0);
  return x;
}

QuadratureRule triangle_quadrature(int exact_degree) {
  if (exact_degree < 0) throw InputError("negative quadrature degree");
  if (exact_degree > kMaxQuadratureDegree)
    throw CapabilityError("triangle quadrature degree " + std::to_string(exact_degree) +
                          " exceeds supported maximum " + std::to_string(kMaxQuadratureDegree));
  const int n = exact_degree / 2 + 1;
  const Rule1D gx = gauss_jacobi(n, 0.0, 0.0);
  const Rule1D gy = gauss_jacobi(n, 1.0, 0.0);
  QuadratureRule q;
  q.exact_degree = exact_degree;
  for (int j = 0; j < n; ++j) {
    const double y = 0.5 * (1.0 + gy.nodes[j]);
    for (int i = 0; i < n; ++i) {
      const double x = 0.5 * (1.0 + gx.nodes[i]) * (1.0 - y);
      q.x.push_back(x);
      q.y.push_back(y);
      q.points.push_back({1.0 - x - y, x, y});
      q.weights.push_back(gx.weights[i] * gy.weights[j] / 8.0);
    }
  }
  return q;
}

}  // namespace stokes
