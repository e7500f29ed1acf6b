#pragma once

#include <array>
#include <vector>

namespace stokes {

struct BarycentricPoint {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
};

struct MultiIndex {
  int a1 = 0, a2 = 0, a3 = 0;
  int order() const { return a1 + a2 + a3; }
  bool operator==(const MultiIndex&) const = default;
};

// Points are stored both as barycentric triples and as reference coordinates
// x = l2, y = l3 on the triangle (0,0), (1,0), (0,1).
struct QuadratureRule {
  std::vector<BarycentricPoint> points;
  std::vector<double> x, y;
  std::vector<double> weights;
  int exact_degree = 0;
  std::size_t size() const { return weights.size(); }
};

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxQuadratureDegree = 60;

// Jacobi polynomial P_n^{(a,b)}(t) by the three-term recurrence in n.
double jacobi_eval(int n, double a, double b, double t);
// d/dt P_n^{(a,b)}(t).
double jacobi_deriv(int n, double a, double b, double t);

double jacobi33_eval(int n, double t);
double jacobi33_deriv(int n, double t);
// P_n^{(3,3)}(-1) = (-1)^n binom(n+3, n).
double jacobi33_at_minus1(int n);

double legendre_eval(int n, double t);
double legendre_deriv(int n, double t);

// All multi-indices with |alpha| = k in ascending lexicographic order of
// (a1, a2, a3).
std::vector<MultiIndex> multi_indices(int k);

// Bernstein polynomial B^k_alpha = k!/(a1!a2!a3!) l1^a1 l2^a2 l3^a3.
double bernstein_eval(int k, const MultiIndex& alpha, const BarycentricPoint& p);
// Cartesian gradient on the reference triangle (d/dx, d/dy).
std::array<double, 2> bernstein_grad(int k, const MultiIndex& alpha, const BarycentricPoint& p);

// Gauss-Jacobi rule on [-1,1] with weight (1-t)^a (1+t)^b (Golub-Welsch).
Rule1D gauss_jacobi(int n, double a, double b);
// Gauss-Lobatto-Legendre nodes on [-1,1] (n >= 2 points), ascending.
std::vector<double> gauss_lobatto_nodes(int n);

// Collapsed tensor Gauss rule on the reference triangle, weights sum to 1/2.
QuadratureRule triangle_quadrature(int exact_degree);

}  // namespace stokes
