#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "stokes/experiment.hpp"
#include "stokes/mesh.hpp"

using namespace stokes;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stokes_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string l;
  std::getline(f, l);
  return l;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(STOKES_CLI_PATH) + " " + args + " 2>/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Cli, MoffattSolveWritesArtifacts) {
  const fs::path out = fresh_dir("moffatt");
  EXPECT_EQ(run_binary("run --problem moffatt --k 4 --tol 1e-8 --seed 1 --out " + out.string()), 0);
  EXPECT_EQ(first_line(out / "residual_history.csv"), "iteration,relative_residual");
  EXPECT_EQ(first_line(out / "fields.csv"), "element,x,y,u1,u2,p,div_u");
  const auto report = nlohmann::json::parse(slurp(out / "mesh_report.json"));
  EXPECT_TRUE(report["converged"].get<bool>());
  EXPECT_EQ(report["triangles"].get<int>(), 18);
  EXPECT_GT(report["kappa"].get<double>(), 0.0);
}

TEST(Cli, TShapeSpectrum) {
  ExperimentConfig cfg;
  cfg.problem = "tshape";
  cfg.n_layers = 3;
  cfg.k = 7;
  cfg.spectrum = true;
  cfg.out_dir = fresh_dir("tshape").string();
  std::ostringstream log;
  ASSERT_EQ(run(cfg, log), kExitOk) << log.str();
  const auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "eigenvalues.json"));
  for (const char* key : {"lambda_max_neg", "lambda_min_neg", "lambda_min_pos", "lambda_max_pos"}) {
    ASSERT_TRUE(j[key].is_number()) << key;
    EXPECT_TRUE(std::isfinite(j[key].get<double>()));
    EXPECT_GT(j[key].get<double>(), 0.0);
  }
  EXPECT_EQ(j["zero_multiplicity"].get<int>(), 1);
  EXPECT_TRUE(j["beta_squared"].is_number());
}

TEST(Cli, MissingMeshFileIsInputError) {
  const fs::path out = fresh_dir("missing");
  EXPECT_EQ(run_binary("run --mesh /nonexistent/mesh.txt --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, NotCornerSplitHasItsOwnExitCode) {
  const fs::path dir = fresh_dir("split");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "tri.mesh");
    f << "tris2d v1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\ncorners 3\n0 0\n1 0\n0 1\n";
  }
  const int rc = run_binary("run --mesh " + (dir / "tri.mesh").string() + " --out " + (dir / "out").string());
  EXPECT_EQ(rc, kExitNotCornerSplit);
  EXPECT_NE(rc, kExitInputError);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Cli, MeshFileProblem) {
  const fs::path dir = fresh_dir("file");
  fs::create_directories(dir);
  write_mesh_file(gen_crossed_rectangle(0, 1, 0, 1, 2, 2), (dir / "sq.mesh").string());
  EXPECT_EQ(run_binary("run --mesh " + (dir / "sq.mesh").string() + " --k 5 --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "fields.csv"));
}

TEST(Cli, InvalidConfigurations) {
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.out_dir = fresh_dir("invalid").string();
  cfg.k = 3;
  EXPECT_EQ(run(cfg, log), kExitInputError);
  cfg.k = 4;
  cfg.tol = 0.5;
  EXPECT_EQ(run(cfg, log), kExitInputError);
  cfg.tol = 1e-8;
  cfg.problem = "cavity";
  EXPECT_EQ(run(cfg, log), kExitInputError);
  EXPECT_FALSE(fs::exists(cfg.out_dir));
  EXPECT_EQ(run_binary("run --k notanumber"), 2);
}

TEST(Cli, NonConvergenceExitCode) {
  ExperimentConfig cfg;
  cfg.maxit = 2;
  cfg.out_dir = fresh_dir("noconv").string();
  std::ostringstream log;
  EXPECT_EQ(run(cfg, log), kExitNonConvergence);
}

TEST(Cli, DeterministicOutputs) {
  ExperimentConfig cfg;
  cfg.k = 5;
  cfg.seed = 42;
  cfg.out_dir = fresh_dir("det_a").string();
  std::ostringstream log;
  ASSERT_EQ(run(cfg, log), kExitOk);
  ExperimentConfig cfg2 = cfg;
  cfg2.out_dir = fresh_dir("det_b").string();
  ASSERT_EQ(run(cfg2, log), kExitOk);
  for (const char* f : {"residual_history.csv", "fields.csv"})
    EXPECT_EQ(slurp(fs::path(cfg.out_dir) / f), slurp(fs::path(cfg2.out_dir) / f)) << f;
}

TEST(Cli, ThreadsFromEnvironment) {
  const fs::path out = fresh_dir("threads");
  EXPECT_EQ(run_binary("--k 4 --out " + out.string() + " --threads 2"), 0);
  setenv("STOKES_THREADS", "zero", 1);
  EXPECT_EQ(run_binary("--k 4 --out " + out.string()), 2);
  unsetenv("STOKES_THREADS");
}
