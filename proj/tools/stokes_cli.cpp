#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stokes/experiment.hpp"

int main(int argc, char** argv) {
  stokes::ExperimentConfig cfg;
  CLI::App app{"High-order divergence-free Stokes solver with interface MINRES"};
  app.require_subcommand(0, 1);
  // Both "stokes_cli run ..." and "stokes_cli ..." are accepted.
  CLI::App* run = app.add_subcommand("run", "run an experiment");
  bool threads_given = false;
  std::string start = "perturbed";
  for (CLI::App* a : {&app, run}) {
    a->add_option("--problem", cfg.problem, "moffatt | tshape | file");
    a->add_option("--mesh", cfg.mesh_path, "mesh file (implies --problem file)");
    a->add_option("--k", cfg.k, "velocity degree");
    a->add_option("--n", cfg.n_layers, "T-shape grading layers");
    a->add_option("--sigma", cfg.sigma, "T-shape grading ratio");
    a->add_option("--tol", cfg.tol, "MINRES tolerance");
    a->add_option("--maxit", cfg.maxit, "MINRES iteration limit");
    a->add_option("--seed", cfg.seed, "seed of the random start");
    a->add_option("--start", start, "initial iterate: zero | perturbed");
    a->add_option("--out", cfg.out_dir, "output directory");
    a->add_flag("--solve", cfg.solve, "solve with MINRES");
    a->add_flag("--spectrum", cfg.spectrum, "extreme eigenvalues of P^-1 S");
    a->add_flag("--infsup", cfg.infsup, "inf-sup eigenvalues");
    a->add_flag("--asm-equiv", cfg.asm_equiv, "ASM equivalence spectra");
    a->add_option("--dense-cap", cfg.dense_cap, "largest dense eigenproblem");
    a->add_flag("--lanczos", cfg.lanczos, "Lanczos above the dense cap");
    a->add_option_function<int>(
        "--threads", [&](int t) { cfg.threads = t; threads_given = true; }, "thread count");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : stokes::kExitInputError;
  }
  if (!threads_given) {
    if (const char* env = std::getenv("STOKES_THREADS")) {
      try {
        cfg.threads = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "error: STOKES_THREADS is not an integer\n";
        return stokes::kExitInputError;
      }
    }
  }
  if (!cfg.mesh_path.empty() && cfg.problem == "moffatt") cfg.problem = "file";
  if (start == "zero") {
    cfg.start = stokes::StartKind::Zero;
  } else if (start != "perturbed") {
    std::cerr << "error: --start must be zero or perturbed\n";
    return stokes::kExitInputError;
  }
  return stokes::run(cfg, std::cerr);
}
