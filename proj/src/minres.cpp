#include "stokes/minres.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace stokes {

SolveReport minres(const LinearOp& S, const LinearOp& Pinv, const Eigen::VectorXd& rhs,
                   Eigen::VectorXd& x, double tol, int maxit) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const Eigen::Index n = rhs.size();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd r1(n), y(n), tmp(n);
  S(x, tmp);
  r1 = rhs - tmp;
  Pinv(r1, y);
  const double beta1 = std::sqrt(std::max(r1.dot(y), 0.0));
  rep.residual_history.push_back(1.0);
  auto finish = [&]() {
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (beta1 == 0.0) {
    rep.converged = true;
    return finish();
  }

  Eigen::VectorXd r2 = r1, v(n), w = Eigen::VectorXd::Zero(n), w1(n), w2 = Eigen::VectorXd::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= maxit; ++itn) {
    v = y / beta;
    S(v, y);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    Pinv(r2, y);
    oldb = beta;
    beta = std::sqrt(std::max(r2.dot(y), 0.0));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar *= sn;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = itn;
    const double rel = phibar / beta1;
    rep.residual_history.push_back(rel);
    if (rel < tol) {
      rep.converged = true;
      break;
    }
    if (beta == 0.0) {  // invariant subspace found; residual cannot decrease further
      break;
    }
  }
  return finish();
}

SolveReport solve(const CondensedSystem& cond, const BlockPreconditioner& P, Eigen::VectorXd& x,
                  double tol, int maxit) {
  const SpMat S = cond.schur();
  const Eigen::VectorXd b = cond.rhs();
  const LinearOp op = [&S](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = S * in; };
  const LinearOp pinv = [&P](const Eigen::VectorXd& in, Eigen::VectorXd& out) { P.apply(in, out); };
  SolveReport rep = minres(op, pinv, b, x, tol, maxit);
  normalize_pressure_mean(cond, x);
  return rep;
}

}  // namespace stokes
