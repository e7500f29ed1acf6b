#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "stokes/errors.hpp"
#include "stokes/precond.hpp"
#include "stokes/problems.hpp"

using namespace stokes;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = U(rng);
  return v;
}

struct Case {
  Mesh mesh;
  ReferenceBasisTable table;
  DofMap dm;
  PartitionedSystem sys;
  CondensedSystem cond;
  BlockPreconditioner P;
  Case(Mesh m, int k) : mesh(std::move(m)), table(build_reference_table(k)), dm(build_dofmap(mesh, k)) {
    sys = assemble(mesh, dm, table, nullptr, nullptr);
    cond = condense(sys);
    P = build_preconditioner(cond, dm, mesh);
  }
  Case(const Case&) = delete;
};

}  // namespace

TEST(Preconditioner, PressureDiagonal) {
  const int k = 4;
  Case c(gen_tshape(1), k);
  for (int p = 0; p < c.dm.n_pvertex; ++p)
    EXPECT_DOUBLE_EQ(c.P.pressure_diag(p), c.dm.patch_area[p] * std::pow(k, -4.0));
  for (int K = 0; K < c.mesh.nt(); ++K)
    EXPECT_DOUBLE_EQ(c.P.pressure_diag(c.dm.n_pvertex + K), c.mesh.area(K));
}

TEST(Preconditioner, PressureDiagonalExamples) {
  // |omega| = 0.2 at k = 4, and an element of area 0.05.
  EXPECT_DOUBLE_EQ(0.2 * std::pow(4.0, -4.0), 7.8125e-4);
  Mesh m = gen_crossed_rectangle(0, 1, 0, 0.2, 1, 1);  // four triangles of area 0.05
  Case c(std::move(m), 4);
  for (int K = 0; K < 4; ++K) EXPECT_NEAR(c.P.pressure_diag(c.dm.n_pvertex + K), 0.05, 1e-16);
}

TEST(Preconditioner, VertexBlocksAreTwoByTwo) {
  Case c(gen_moffatt_wedge(), 5);
  EXPECT_FALSE(c.P.c1.empty());
  for (const auto& b : c.P.c1) EXPECT_EQ(b.size, 2);
  for (const auto& b : c.P.edges) EXPECT_EQ(b.size, 2 * (5 - 3));
}

TEST(Preconditioner, ApplyInvertsMatrix) {
  Case c(gen_moffatt_wedge(), 6);
  const SpMat P = c.P.matrix();
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd x = random_vector(c.P.size(), seed);
    const Eigen::VectorXd y = P * c.P.apply(x);
    EXPECT_LT((y - x).cwiseAbs().maxCoeff(), 1e-11);
  }
  const Eigen::VectorXd z = c.P.apply(Eigen::VectorXd::Zero(c.P.size()));
  EXPECT_EQ(z.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Preconditioner, VelocityBlocksMatchSchurDiagonalBlocks) {
  Case c(gen_tshape(1), 5);
  const Eigen::MatrixXd A = c.cond.A, P = c.P.matrix();
  for (const auto& b : c.P.c1)
    EXPECT_LT((P.block(b.start, b.start, 2, 2) - A.block(b.start, b.start, 2, 2)).norm(), 1e-14 * A.norm());
  const auto& b0 = c.P.c0;
  EXPECT_LT((P.block(b0.start, b0.start, b0.size, b0.size) - A.block(b0.start, b0.start, b0.size, b0.size)).norm(),
            1e-14 * A.norm());
}

TEST(Preconditioner, BlockDiagonality) {
  Case c(gen_moffatt_wedge(), 5);
  std::vector<BlockRange> blocks = c.P.c1;
  blocks.insert(blocks.end(), c.P.edges.begin(), c.P.edges.end());
  blocks.push_back(c.P.c0);
  for (const auto& b : blocks) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(c.P.size());
    x.segment(b.start, b.size) = random_vector(b.size, b.start + 1);
    Eigen::VectorXd y = c.P.apply(x);
    y.segment(b.start, b.size).setZero();
    EXPECT_EQ(y.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Preconditioner, FlopCountFromBlockSizes) {
  Case c(gen_moffatt_wedge(), 7);
  double expect = 2.0 * c.P.c0.size * c.P.c0.size + c.P.ne;
  for (const auto& b : c.P.c1) expect += 2.0 * b.size * b.size;
  for (const auto& b : c.P.edges) expect += 2.0 * b.size * b.size;
  EXPECT_DOUBLE_EQ(c.P.apply_flops(), expect);
}

TEST(Preconditioner, IndefiniteBlockThrows) {
  Case c(gen_moffatt_wedge(), 4);
  CondensedSystem bad = c.cond;
  bad.A = -bad.A;
  EXPECT_THROW(build_preconditioner(bad, c.dm, c.mesh), ConfigurationError);
}
