#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "stokes/condense.hpp"
#include "stokes/precond.hpp"

namespace stokes {

// Extremal eigenvalues of P^-1 S: the spectrum lies in
// [-lambda_max_neg, -lambda_min_neg] U {0} U [lambda_min_pos, lambda_max_pos].
struct EigenSummary {
  double lambda_max_neg = 0.0, lambda_min_neg = 0.0;
  double lambda_min_pos = 0.0, lambda_max_pos = 0.0;
  int zero_multiplicity = 0;
  double beta_squared = std::numeric_limits<double>::quiet_NaN();
  // Condition number entering the two-step MINRES contraction bound.
  double sigma() const {
    return lambda_max_neg * lambda_max_pos / (lambda_min_neg * lambda_min_pos);
  }
  // Contraction factor per two iterations.
  double rho() const;
  // Iterations after which the bound 2 rho^(n/2) drops below tol.
  int iteration_bound(double tol) const;
};

struct SpectrumOptions {
  int dense_cap = 20000;     // largest dense generalized eigenproblem
  bool lanczos = false;      // allow the iterative mode above the cap
  int lanczos_steps = 200;
  std::uint64_t seed = 1;
};

inline constexpr double kZeroThreshold = 1e-10;

// Eigenvalues of A x = lambda B x (B SPD), ascending. Throws InputError when
// either matrix fails the symmetry check.
Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

EigenSummary summarize(const Eigen::VectorXd& eigenvalues);

EigenSummary schur_spectrum(const CondensedSystem& cond, const BlockPreconditioner& P,
                            const SpectrumOptions& opt = {});

struct InfSupResult {
  double beta_squared = 0.0;
  double max_eigenvalue = 0.0;
  int zero_multiplicity = 0;
  Eigen::VectorXd eigenvalues;
};
// B A^-1 B^T q = lambda M q over the exterior pressure space.
InfSupResult infsup_spectrum(const CondensedSystem& cond, const SpectrumOptions& opt = {});

struct AsmSpectra {
  double pressure_min = 0.0, pressure_max = 0.0;  // M-tilde vs M-bar
  double velocity_min = 0.0, velocity_max = 0.0;  // A-tilde vs A-bar
  double schur_min = 0.0, schur_max = 0.0;        // B A^-1 B^T vs M-bar, nonzero part
};
AsmSpectra asm_equivalence_spectra(const CondensedSystem& cond, const BlockPreconditioner& P,
                                   const SpectrumOptions& opt = {});

}  // namespace stokes
