#include "stokes/precond.hpp"

#include <cmath>
#include <string>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

Eigen::MatrixXd dense_block(const SpMat& A, const BlockRange& r) {
  return Eigen::MatrixXd(A.block(r.start, r.start, r.size, r.size));
}

}  // namespace

BlockPreconditioner build_preconditioner(const CondensedSystem& cond, const DofMap& dm,
                                         const Mesh& mesh) {
  BlockPreconditioner P;
  P.nE = cond.nE;
  P.ne = cond.ne;
  P.k = dm.k;
  P.c0 = dm.c0_block;
  P.c1 = dm.c1_blocks;
  P.edges = dm.edge_blocks;
  std::vector<Eigen::Triplet<double>> trip;
  auto keep = [&](const BlockRange& r, const Eigen::MatrixXd& D) {
    for (int i = 0; i < r.size; ++i)
      for (int j = 0; j < r.size; ++j) trip.emplace_back(r.start + i, r.start + j, D(i, j));
  };
  if (P.c0.size > 0) {
    const Eigen::MatrixXd D = dense_block(cond.A, P.c0);
    P.c0_factor.compute(D);
    if (P.c0_factor.info() != Eigen::Success)
      throw ConfigurationError("C0 vertex block is not positive definite");
    keep(P.c0, D);
  }
  for (const auto& r : P.c1) {
    const Eigen::Matrix2d D = dense_block(cond.A, r);
    P.c1_factor.emplace_back(D);
    if (P.c1_factor.back().info() != Eigen::Success)
      throw ConfigurationError("C1 vertex block at offset " + std::to_string(r.start) +
                               " is not positive definite");
    keep(r, D);
  }
  for (const auto& r : P.edges) {
    const Eigen::MatrixXd D = dense_block(cond.A, r);
    P.edge_factor.emplace_back(D);
    if (P.edge_factor.back().info() != Eigen::Success)
      throw ConfigurationError("edge block at offset " + std::to_string(r.start) +
                               " is not positive definite");
    keep(r, D);
  }
  P.velocity_blocks_.resize(P.nE, P.nE);
  P.velocity_blocks_.setFromTriplets(trip.begin(), trip.end());

  P.pressure_diag.resize(P.ne);
  const double k4 = std::pow(static_cast<double>(dm.k), -4.0);
  for (int p = 0; p < dm.n_pvertex; ++p) P.pressure_diag(p) = dm.patch_area[p] * k4;
  for (int K = 0; K < mesh.nt(); ++K) P.pressure_diag(dm.n_pvertex + K) = mesh.area(K);
  return P;
}

void BlockPreconditioner::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  out.resize(size());
  if (c0.size > 0) out.segment(c0.start, c0.size) = c0_factor.solve(in.segment(c0.start, c0.size));
  for (std::size_t i = 0; i < c1.size(); ++i)
    out.segment<2>(c1[i].start) = c1_factor[i].solve(in.segment<2>(c1[i].start));
  for (std::size_t i = 0; i < edges.size(); ++i)
    out.segment(edges[i].start, edges[i].size) =
        edge_factor[i].solve(in.segment(edges[i].start, edges[i].size));
  out.tail(ne) = in.tail(ne).cwiseQuotient(pressure_diag);
}

Eigen::VectorXd BlockPreconditioner::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out;
  apply(in, out);
  return out;
}

double BlockPreconditioner::apply_flops() const {
  // Two triangular solves of order n cost 2n^2 operations.
  auto tri = [](double n) { return 2.0 * n * n; };
  double f = tri(c0.size);
  for (const auto& r : c1) f += tri(r.size);
  for (const auto& r : edges) f += tri(r.size);
  return f + ne;
}

SpMat BlockPreconditioner::matrix() const {
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < velocity_blocks_.outerSize(); ++j)
    for (SpMat::InnerIterator it(velocity_blocks_, j); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < ne; ++i) t.emplace_back(nE + i, nE + i, pressure_diag(i));
  SpMat P(size(), size());
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

}  // namespace stokes
