#include "stokes/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "stokes/errors.hpp"

namespace stokes {

double EigenSummary::rho() const {
  const double s = std::sqrt(sigma());
  return (s - 1.0) / (s + 1.0);
}

int EigenSummary::iteration_bound(double tol) const {
  const double r = rho();
  if (r <= 0.0) return 2;
  // 2 r^m <= tol after m double steps.
  const double m = std::ceil(std::log(tol / 2.0) / std::log(r));
  return 2 * static_cast<int>(std::max(m, 1.0));
}

namespace {

void check_symmetric(const Eigen::MatrixXd& A, const char* name) {
  const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError(std::string(name) + " fails the symmetry check");
}

void check_size(int n, const SpectrumOptions& opt) {
  if (n > opt.dense_cap)
    throw CapabilityError("dense eigenproblem of size " + std::to_string(n) +
                          " exceeds the cap " + std::to_string(opt.dense_cap) +
                          "; use the Lanczos mode");
}

using Op = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Ritz values of an operator self-adjoint in the M inner product, with the
// direction z deflated. Full reorthogonalization.
Eigen::VectorXd lanczos(const Op& T, const SpMat& M, const Eigen::VectorXd& z, int steps,
                        std::uint64_t seed) {
  const Eigen::Index n = M.rows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Eigen::VectorXd Mz = M * z;
  const double zMz = z.dot(Mz);
  auto deflate = [&](Eigen::VectorXd& v) {
    if (zMz > 0) v -= (Mz.dot(v) / zMz) * z;
  };
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = U(rng);
  deflate(q);
  q /= std::sqrt(q.dot(M * q));
  const int m = static_cast<int>(std::min<Eigen::Index>(steps, n - (zMz > 0 ? 1 : 0)));
  Eigen::MatrixXd Q(n, m), MQ(n, m);
  std::vector<double> alpha, beta;
  for (int j = 0; j < m; ++j) {
    Q.col(j) = q;
    MQ.col(j) = M * q;
    Eigen::VectorXd w = T(q);
    deflate(w);
    alpha.push_back(MQ.col(j).dot(w));
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(j + 1) * (MQ.leftCols(j + 1).transpose() * w);
    const double b = std::sqrt(std::max(w.dot(M * w), 0.0));
    if (j + 1 == m || b < 1e-12 * std::abs(alpha.back()) + 1e-300) break;
    beta.push_back(b);
    q = w / b;
  }
  const int r = static_cast<int>(alpha.size());
  Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), r);
  if (r == 1) return d;
  Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(beta.data(), r - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenSummary schur_lanczos(const CondensedSystem& cond, const BlockPreconditioner& P,
                           const SpectrumOptions& opt) {
  const SpMat S = cond.schur();
  const SpMat Pm = P.matrix();
  const Eigen::VectorXd z = cond.null_vector();
  const Op PinvS = [&](const Eigen::VectorXd& v) { return P.apply(S * v); };
  const Eigen::VectorXd outer = lanczos(PinvS, Pm, z, opt.lanczos_steps, opt.seed);

  // Inverse iteration operator: bordered solve with the null direction fixed.
  const int n = cond.size();
  const Eigen::VectorXd w = cond.pressure_integral_weights();
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < S.outerSize(); ++j)
    for (SpMat::InnerIterator it(S, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < n; ++i)
    if (w(i) != 0.0) {
      t.emplace_back(n, i, w(i));
      t.emplace_back(i, n, w(i));
    }
  SpMat Sb(n + 1, n + 1);
  Sb.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(Sb);
  if (lu.info() != Eigen::Success) throw ConfigurationError("interface factorization failed");
  const Op SinvP = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd b(n + 1);
    b << Pm * v, 0.0;
    return Eigen::VectorXd(lu.solve(b).head(n));
  };
  const Eigen::VectorXd inner = lanczos(SinvP, Pm, z, opt.lanczos_steps, opt.seed + 1);

  EigenSummary s;
  s.lambda_max_pos = outer.maxCoeff();
  s.lambda_max_neg = -outer.minCoeff();
  s.lambda_min_pos = 1.0 / inner.maxCoeff();
  s.lambda_min_neg = -1.0 / inner.minCoeff();
  s.zero_multiplicity = 1;  // deflated by construction
  return s;
}

}  // namespace

Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  check_symmetric(A, "left matrix");
  check_symmetric(B, "right matrix");
  const Eigen::MatrixXd As = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd Bs = 0.5 * (B + B.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(As, Bs, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConfigurationError("generalized eigensolver failed (right matrix not positive definite?)");
  return es.eigenvalues();
}

EigenSummary summarize(const Eigen::VectorXd& ev) {
  EigenSummary s;
  const double big = ev.cwiseAbs().maxCoeff();
  const double thr = kZeroThreshold * big;
  double minpos = INFINITY, maxpos = 0, minneg = INFINITY, maxneg = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (std::abs(l) < thr) {
      ++s.zero_multiplicity;
    } else if (l > 0) {
      minpos = std::min(minpos, l);
      maxpos = std::max(maxpos, l);
    } else {
      minneg = std::min(minneg, -l);
      maxneg = std::max(maxneg, -l);
    }
  }
  s.lambda_min_pos = minpos;
  s.lambda_max_pos = maxpos;
  s.lambda_min_neg = minneg;
  s.lambda_max_neg = maxneg;
  return s;
}

EigenSummary schur_spectrum(const CondensedSystem& cond, const BlockPreconditioner& P,
                            const SpectrumOptions& opt) {
  if (cond.size() > opt.dense_cap) {
    if (!opt.lanczos) check_size(cond.size(), opt);
    return schur_lanczos(cond, P, opt);
  }
  const Eigen::MatrixXd S(cond.schur());
  const Eigen::MatrixXd Pm(P.matrix());
  return summarize(generalized_eigenvalues(S, Pm));
}

InfSupResult infsup_spectrum(const CondensedSystem& cond, const SpectrumOptions& opt) {
  check_size(cond.size(), opt);
  const Eigen::MatrixXd A(cond.A), B(cond.B), M(cond.M);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw ConfigurationError("condensed velocity block is not SPD");
  const Eigen::MatrixXd X = B * llt.solve(B.transpose());
  InfSupResult r;
  r.eigenvalues = generalized_eigenvalues(0.5 * (X + X.transpose()), M);
  const double thr = kZeroThreshold * r.eigenvalues.cwiseAbs().maxCoeff();
  r.beta_squared = INFINITY;
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    const double l = r.eigenvalues(i);
    if (std::abs(l) < thr)
      ++r.zero_multiplicity;
    else
      r.beta_squared = std::min(r.beta_squared, l);
  }
  r.max_eigenvalue = r.eigenvalues.maxCoeff();
  return r;
}

AsmSpectra asm_equivalence_spectra(const CondensedSystem& cond, const BlockPreconditioner& P,
                                   const SpectrumOptions& opt) {
  check_size(cond.size(), opt);
  AsmSpectra out;
  const Eigen::MatrixXd Pm(P.matrix());
  const Eigen::MatrixXd A(cond.A), M(cond.M);
  const Eigen::VectorXd ev = generalized_eigenvalues(A, Pm.topLeftCorner(cond.nE, cond.nE));
  out.velocity_min = ev.minCoeff();
  out.velocity_max = ev.maxCoeff();
  const Eigen::MatrixXd Mbar = Pm.bottomRightCorner(cond.ne, cond.ne);
  const Eigen::VectorXd pv = generalized_eigenvalues(M, Mbar);
  out.pressure_min = pv.minCoeff();
  out.pressure_max = pv.maxCoeff();
  const Eigen::MatrixXd B(cond.B);
  const Eigen::MatrixXd X = B * A.llt().solve(B.transpose());
  const Eigen::VectorXd sv = generalized_eigenvalues(0.5 * (X + X.transpose()), Mbar);
  const double thr = kZeroThreshold * sv.cwiseAbs().maxCoeff();
  out.schur_min = INFINITY;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (std::abs(sv(i)) >= thr) out.schur_min = std::min(out.schur_min, sv(i));
  out.schur_max = sv.maxCoeff();
  return out;
}

}  // namespace stokes
