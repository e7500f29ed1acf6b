#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stokes/minres.hpp"

namespace stokes {

enum ExitCode : int {
  kExitOk = 0,
  kExitNonConvergence = 1,
  kExitInputError = 2,
  kExitCapabilityError = 3,
  kExitNotCornerSplit = 4,
};

enum class StartKind { Zero, Perturbed };

struct ExperimentConfig {
  std::string problem = "moffatt";  // moffatt | tshape | file
  std::string mesh_path;
  int k = 4;
  int n_layers = 1;
  double sigma = 0.08;
  double tol = 1e-8;
  int maxit = kDefaultMaxIt;
  std::uint64_t seed = 1;
  StartKind start = StartKind::Perturbed;
  std::string out_dir = "out";
  bool solve = false, spectrum = false, infsup = false, asm_equiv = false;
  int threads = 1;
  int dense_cap = 20000;
  bool lanczos = false;
};

// Throws InputError on an invalid configuration.
void validate(const ExperimentConfig& cfg);

// Runs the requested studies and writes the artifacts into cfg.out_dir.
// Solve is implied when no study is selected. Nothing is written on error.
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace stokes
