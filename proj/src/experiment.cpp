#include "stokes/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stokes/errors.hpp"
#include "stokes/fields.hpp"
#include "stokes/problems.hpp"
#include "stokes/spectrum.hpp"

namespace stokes {

namespace {

struct NotCornerSplit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Finite numbers keep full precision; non-finite ones become null.
Json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string dump(const Json& j) {
  // nlohmann prints doubles with round-trip precision.
  return j.dump(2) + "\n";
}

Problem load_problem(const ExperimentConfig& cfg) {
  if (cfg.problem == "moffatt") return moffatt_problem();
  if (cfg.problem == "tshape") return tshape_problem(cfg.n_layers, cfg.sigma);
  Problem p;
  p.name = "file";
  p.mesh = read_mesh_file(cfg.mesh_path);
  // No-slip walls driven by a rotational body force.
  p.f = [](const Vec2& x) { return Vec2(-x.y(), x.x()); };
  p.g = [](const Vec2&, const Vec2&) { return Vec2(0.0, 0.0); };
  return p;
}

Json summary_json(const EigenSummary& s, double tol) {
  Json j;
  j["lambda_max_neg"] = jnum(s.lambda_max_neg);
  j["lambda_min_neg"] = jnum(s.lambda_min_neg);
  j["lambda_min_pos"] = jnum(s.lambda_min_pos);
  j["lambda_max_pos"] = jnum(s.lambda_max_pos);
  j["zero_multiplicity"] = s.zero_multiplicity;
  j["beta_squared"] = jnum(s.beta_squared);
  j["sigma"] = jnum(s.sigma());
  j["rho"] = jnum(s.rho());
  j["iteration_bound"] = s.iteration_bound(tol);
  return j;
}

int run_impl(const ExperimentConfig& cfg, std::ostream& log,
             std::map<std::string, std::string>& files) {
  validate(cfg);
  const bool do_solve =
      cfg.solve || !(cfg.spectrum || cfg.infsup || cfg.asm_equiv);

  Problem prob = load_problem(cfg);
  const Mesh& mesh = prob.mesh;
  const CornerSplitResult split = corner_split_check(mesh);
  if (!split.ok) {
    std::ostringstream s;
    s << "mesh is not corner-split: " << split.offending.size()
      << " triangle(s) have more than one boundary edge";
    throw NotCornerSplit(s.str());
  }
  const ShapeReport shape = shape_report(mesh);
  const ReferenceBasisTable table = build_reference_table(cfg.k);
  const DofMap dm = build_dofmap(mesh, cfg.k);
  const PartitionedSystem sys = assemble(mesh, dm, table, prob.f, prob.g);
  const CondensedSystem cond = condense(sys);
  const BlockPreconditioner P = build_preconditioner(cond, dm, mesh);
  log << "problem " << prob.name << " k=" << cfg.k << " elements=" << mesh.nt()
      << " interface=" << cond.size() << " kappa=" << num(shape.kappa) << "\n";

  Json report;
  report["problem"] = prob.name;
  report["k"] = cfg.k;
  report["kappa"] = shape.kappa;
  report["h"] = shape.h;
  report["vertices"] = mesh.nv();
  report["triangles"] = mesh.nt();
  report["edges"] = mesh.ne();
  report["corners"] = static_cast<int>(mesh.corners.size());
  report["reoriented"] = mesh.reoriented;
  report["velocity_dofs"] = dm.nvel();
  report["pressure_dofs"] = dm.npres();
  report["interface_velocity"] = cond.nE;
  report["interface_pressure"] = cond.ne;
  report["constrained_velocity"] = dm.nC;
  report["preconditioner_flops"] = P.apply_flops();

  int code = kExitOk;
  if (do_solve) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cond.size());
    if (cfg.start == StartKind::Perturbed) {
      x = solve_interface_direct(cond);
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      for (int i = 0; i < x.size(); ++i) x(i) += U(rng);
    }
    const SolveReport rep = solve(cond, P, x, cfg.tol, cfg.maxit);
    log << "minres " << (rep.converged ? "converged" : "did not converge") << " in "
        << rep.iterations << " iterations\n";
    std::ostringstream h;
    h << "iteration,relative_residual\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
      h << i << "," << num(rep.residual_history[i]) << "\n";
    files["residual_history.csv"] = h.str();

    const FullSolution sol = back_substitute(cond, x);
    const auto samples = sample_fields(sys, sol);
    std::ostringstream f;
    f << "element,x,y,u1,u2,p,div_u\n";
    for (const auto& s : samples)
      f << s.elem << "," << num(s.x) << "," << num(s.y) << "," << num(s.u1) << ","
        << num(s.u2) << "," << num(s.p) << "," << num(s.div) << "\n";
    files["fields.csv"] = f.str();

    report["converged"] = rep.converged;
    report["iterations"] = rep.iterations;
    report["tol"] = cfg.tol;
    report["seed"] = cfg.seed;
    report["h1_seminorm"] = h1_seminorm(sys, sol.u);
    if (!rep.converged) code = kExitNonConvergence;
  }

  SpectrumOptions sopt;
  sopt.dense_cap = cfg.dense_cap;
  sopt.lanczos = cfg.lanczos;
  sopt.seed = cfg.seed;
  if (cfg.spectrum || cfg.infsup || cfg.asm_equiv) {
    Json ej;
    EigenSummary es;
    if (cfg.spectrum) es = schur_spectrum(cond, P, sopt);
    if (cfg.infsup || cfg.spectrum) {
      const InfSupResult inf = infsup_spectrum(cond, sopt);
      es.beta_squared = inf.beta_squared;
      ej["infsup"] = {{"beta_squared", jnum(inf.beta_squared)},
                      {"max_eigenvalue", jnum(inf.max_eigenvalue)},
                      {"zero_multiplicity", inf.zero_multiplicity}};
    }
    if (cfg.spectrum) {
      Json s = summary_json(es, cfg.tol);
      for (auto& [key, v] : ej.items()) s[key] = v;
      ej = s;
    } else {
      ej["beta_squared"] = jnum(es.beta_squared);
    }
    if (cfg.asm_equiv) {
      const AsmSpectra a = asm_equivalence_spectra(cond, P, sopt);
      ej["asm"] = {{"pressure_min", jnum(a.pressure_min)}, {"pressure_max", jnum(a.pressure_max)},
                   {"velocity_min", jnum(a.velocity_min)}, {"velocity_max", jnum(a.velocity_max)},
                   {"schur_min", jnum(a.schur_min)}, {"schur_max", jnum(a.schur_max)}};
    }
    files["eigenvalues.json"] = dump(ej);
    log << "spectrum written\n";
  }
  files["mesh_report.json"] = dump(report);
  return code;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.problem != "moffatt" && cfg.problem != "tshape" && cfg.problem != "file")
    throw InputError("unknown problem '" + cfg.problem + "'");
  if (cfg.problem == "file" && cfg.mesh_path.empty())
    throw InputError("problem 'file' needs a mesh path");
  if (cfg.k < kMinOrder || cfg.k > kMaxOrder)
    throw InputError("k must lie in [" + std::to_string(kMinOrder) + ", " +
                     std::to_string(kMaxOrder) + "]");
  if (!(cfg.tol > 0.0 && cfg.tol <= 1e-2)) throw InputError("tol must lie in (0, 1e-2]");
  if (cfg.maxit < 1) throw InputError("maxit must be positive");
  if (cfg.problem == "tshape" && (cfg.n_layers < 1 || cfg.n_layers > 8))
    throw InputError("n must lie in [1, 8]");
  if (cfg.problem == "tshape" && !(cfg.sigma > 0.0 && cfg.sigma < 1.0))
    throw InputError("sigma must lie in (0, 1)");
  if (cfg.threads < 1) throw InputError("threads must be positive");
  if (cfg.out_dir.empty()) throw InputError("output directory is empty");
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  std::map<std::string, std::string> files;
  int code = kExitOk;
  try {
    code = run_impl(cfg, log, files);
  } catch (const NotCornerSplit& e) {
    log << "error: " << e.what() << "\n";
    return kExitNotCornerSplit;
  } catch (const ConfigurationError& e) {
    log << "error: " << e.what() << "\n";
    return kExitCapabilityError;
  } catch (const CapabilityError& e) {
    log << "error: " << e.what() << "\n";
    return kExitCapabilityError;
  } catch (const InputError& e) {
    log << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& [name, text] : files) {
      std::ofstream out(std::filesystem::path(cfg.out_dir) / name, std::ios::binary);
      out << text;
      if (!out) throw InputError("cannot write " + name);
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return code;
}

}  // namespace stokes
