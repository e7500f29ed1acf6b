#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "stokes/condense.hpp"
#include "stokes/precond.hpp"

namespace stokes {

using LinearOp = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // relative P^-1-norm residuals, first entry 1
  bool converged = false;
  double wall_time = 0.0;  // seconds
};

inline constexpr int kDefaultMaxIt = 500;

// Preconditioned MINRES for symmetric S and SPD preconditioner (applied as
// its inverse). x holds the initial iterate on entry and the result on exit.
// Stops when sqrt(r^T P^-1 r / r0^T P^-1 r0) < tol.
SolveReport minres(const LinearOp& S, const LinearOp& Pinv, const Eigen::VectorXd& rhs,
                   Eigen::VectorXd& x, double tol = 1e-8, int maxit = kDefaultMaxIt);

// MINRES on the interface system with the block preconditioner; the returned
// pressure has zero mean over the domain.
SolveReport solve(const CondensedSystem& cond, const BlockPreconditioner& P, Eigen::VectorXd& x,
                  double tol = 1e-8, int maxit = kDefaultMaxIt);

}  // namespace stokes
