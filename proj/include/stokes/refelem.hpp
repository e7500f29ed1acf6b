#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stokes/polyquad.hpp"

namespace stokes {

inline constexpr int kMinOrder = 4;
inline constexpr int kMaxOrder = 16;

enum class RoleKind {
  PressureVertex,
  PressureAverage,
  PressureInterior,
  VelC0Vertex,
  VelC1Vertex,
  VelEdge,
  VelInterior
};

// index: vertex (0..2), reference edge (0..2, opposite the vertex of the same
// number) or interior counter; sub: derivative direction (C1) or edge degree l.
struct BasisRole {
  RoleKind kind;
  int index = 0;
  int sub = 0;
  MultiIndex alpha{};
};

// Local numbering of the scalar velocity basis of order k:
//   0..2            C0 vertex functions
//   3 + 2i + d      C1 vertex functions at vertex i, d = 0 for (1,0), 1 for (0,1)
//   9 + e(k-3) + l  edge functions of edge e, l = 0..k-4
//   9 + 3(k-3) ..   interior functions
// Local pressure numbering: 0..2 vertex, 3 average, 4.. interior.
inline int velocity_count(int k) { return (k + 1) * (k + 2) / 2; }
inline int velocity_interior_count(int k) { return (k - 1) * (k - 2) / 2; }
inline int velocity_exterior_count(int k) { return 9 + 3 * (k - 3); }
inline int c1_local(int vertex, int d) { return 3 + 2 * vertex + d; }
inline int edge_local(int k, int edge, int l) { return 9 + edge * (k - 3) + l; }
inline int pressure_count(int k) { return k * (k + 1) / 2; }
inline int pressure_interior_count(int k) { return (k * k + k - 8) / 2; }

// Endpoints of reference edge e: ((e+1)%3, (e+2)%3).
inline int edge_start(int e) { return (e + 1) % 3; }
inline int edge_end(int e) { return (e + 2) % 3; }

// Values and reference gradients of every scalar velocity basis function at
// reference point (x, y). Output vectors are resized.
void eval_velocity_basis(int k, double x, double y, Eigen::VectorXd& val, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dy);
// Same for the element pressure basis (degree k-1 space).
void eval_pressure_basis(int k, double x, double y, Eigen::VectorXd& val, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dy);

std::vector<BasisRole> velocity_roles(int k);
std::vector<BasisRole> pressure_roles(int k);

struct ReferenceBasisTable {
  int k = 0;
  QuadratureRule rule;
  std::vector<BasisRole> p_roles, v_roles;
  // [basis x quadrature point]
  Eigen::MatrixXd p_val, p_dx, p_dy;
  Eigen::MatrixXd v_val, v_dx, v_dy;
  // Reference integrals: stiff_ab(p,q) = int d_a phi_p d_b phi_q,
  // div_a(j,q) = int psi_j d_a phi_q, masses of both families.
  Eigen::MatrixXd stiff_xx, stiff_xy, stiff_yy;
  Eigen::MatrixXd div_x, div_y;
  Eigen::MatrixXd p_mass, v_mass;

  int nv() const { return static_cast<int>(v_roles.size()); }
  int np() const { return static_cast<int>(p_roles.size()); }
};

void build_pressure_basis(int k, const QuadratureRule& rule, ReferenceBasisTable& t);
void build_velocity_basis(int k, const QuadratureRule& rule, ReferenceBasisTable& t);
// Full table with quadrature of degree 2k+2 and all reference integrals.
ReferenceBasisTable build_reference_table(int k);

struct EdgeTrace {
  std::vector<double> t;       // parameter in [0,1] from edge_start to edge_end
  Eigen::MatrixXd values;      // [velocity basis x point]
};
// Velocity traces on reference edge e (0..2) at npts Gauss-Legendre points.
EdgeTrace edge_trace(const ReferenceBasisTable& table, int edge, int npts);

}  // namespace stokes
