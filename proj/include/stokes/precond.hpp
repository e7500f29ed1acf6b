#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

#include "stokes/condense.hpp"

namespace stokes {

// Block-diagonal preconditioner diag(Abar, Mbar). Abar keeps the diagonal
// blocks of the condensed velocity matrix: all free C0 vertex DOFs together,
// one 2x2 block per C1 vertex direction and one block per interior edge. Mbar
// is diagonal: |omega| k^-4 for pressure vertex DOFs, |K| for averages.
struct BlockPreconditioner {
  int nE = 0, ne = 0, k = 0;
  BlockRange c0;
  Eigen::LLT<Eigen::MatrixXd> c0_factor;
  std::vector<BlockRange> c1;
  std::vector<Eigen::LLT<Eigen::Matrix2d>> c1_factor;
  std::vector<BlockRange> edges;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> edge_factor;
  Eigen::VectorXd pressure_diag;

  int size() const { return nE + ne; }
  // out = P^-1 in over the interface vector [u_E | p_e].
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;
  // Floating point operations of one apply, counted from the block sizes.
  double apply_flops() const;
  // Explicit P (for diagnostics and tests only).
  SpMat matrix() const;

 private:
  SpMat velocity_blocks_;  // kept only to form matrix()
  friend BlockPreconditioner build_preconditioner(const CondensedSystem&, const DofMap&,
                                                  const Mesh&);
};

// Throws ConfigurationError if any block is not positive definite.
BlockPreconditioner build_preconditioner(const CondensedSystem& cond, const DofMap& dm,
                                         const Mesh& mesh);

}  // namespace stokes
