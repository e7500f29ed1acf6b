#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "stokes/assembly.hpp"

namespace stokes {

// Factored interior saddle block [[A_II, B_iI^T], [B_iI, 0]] of one element,
// eliminated by blocks: A_II and the pressure Schur complement B A^-1 B^T are
// both symmetric positive definite.
struct InteriorSaddle {
  Eigen::LLT<Eigen::MatrixXd> A;
  Eigen::LLT<Eigen::MatrixXd> S;
  Eigen::MatrixXd B;        // interior pressure x interior velocity
  Eigen::MatrixXd AinvBt;
  int nu = 0, np = 0;
  void factor(const Eigen::MatrixXd& Aii, const Eigen::MatrixXd& Bii);
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
};

struct ElementCondensation {
  std::vector<int> ext, in;   // local indices into [velocity 2nv | pressure np]
  std::vector<int> ext_iface; // interface index, or -1 - constrained index
  InteriorSaddle Z;
  Eigen::MatrixXd K_IE;
  Eigen::VectorXd r_I;        // interior load
  Eigen::MatrixXd S;          // condensed element matrix over ext
  Eigen::VectorXd F;          // condensed element load over ext
};

// Interface unknowns are ordered [u_E (nE) | p_e (ne)].
struct CondensedSystem {
  const PartitionedSystem* sys = nullptr;
  int nE = 0, ne = 0;
  SpMat A;   // nE x nE
  SpMat B;   // ne x nE
  SpMat C;   // ne x ne, vanishes up to roundoff
  Eigen::VectorXd f_star, g_star;
  SpMat M;   // exterior pressure mass of the projected functions
  std::vector<ElementCondensation> elems;
  double setup_flops = 0.0;

  int size() const { return nE + ne; }
  // [[A, B^T], [B, 0]].
  SpMat schur() const;
  Eigen::VectorXd rhs() const;
  // Constant pressure: 1 on all vertex and average DOFs.
  Eigen::VectorXd null_vector() const;
  // Weights w with w . x = integral of the pressure of interface vector x.
  Eigen::VectorXd pressure_integral_weights() const;
};

CondensedSystem condense(const PartitionedSystem& sys);

struct FullSolution {
  Eigen::VectorXd u;  // all velocity DOFs in global numbering
  Eigen::VectorXd p;  // all pressure DOFs
};

FullSolution back_substitute(const CondensedSystem& cond, const Eigen::VectorXd& iface);

// Exterior pressure mass M_ee - M_ei M_ii^-1 M_ie, assembled.
SpMat exterior_pressure_mass(const CondensedSystem& cond);

// Subtracts the mean pressure from an interface vector (vertex and average DOFs).
void normalize_pressure_mean(const CondensedSystem& cond, Eigen::VectorXd& iface);

// Direct solve of the singular interface system with the pressure mean fixed
// to zero (bordered sparse LU).
Eigen::VectorXd solve_interface_direct(const CondensedSystem& cond);

}  // namespace stokes
