/**
 * \file linalg.hpp
 * \brief Dense kernels used by the operator construction: minimum-norm least
 *        squares, Levenberg-Marquardt, and general real eigenvalues.
 */
#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sbp/types.hpp"

namespace sbp {

/// Minimum-norm least-squares solution of A x = b via SVD (LAPACK dgelsd).
/// `rank_tol` is relative to the largest singular value.
inline Vec min_norm_lstsq(const Mat& A, const Vec& b, double rank_tol = 1e-12) {
  require(A.rows() >= 1 && A.cols() >= 1, "min_norm_lstsq: empty matrix");
  require(A.rows() == b.size(), "min_norm_lstsq: size mismatch");
  require(A.allFinite() && b.allFinite(), "min_norm_lstsq: non-finite input");
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Eigen::MatrixXd a = A;  // dgelsd overwrites its input
  std::vector<double> rhs(std::max(m, n), 0.0);
  for (int i = 0; i < m; ++i) rhs[i] = b[i];
  std::vector<double> sv(std::min(m, n));
  int rank = 0;
  const int info =
      LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, a.data(), m, rhs.data(),
                     std::max(m, n), sv.data(), rank_tol, &rank);
  if (info != 0) throw std::runtime_error("min_norm_lstsq: dgelsd failed");
  return Eigen::Map<const Vec>(rhs.data(), n);
}

struct LMOptions {
  int max_iterations = 200;
  double residual_tol = 1e-13;  // on the infinity norm of the residual
  double damping_init = 1e-3;
  double damping_grow = 10.0;
  double damping_shrink = 10.0;
  double fd_step = 1e-7;  // forward-difference Jacobian step
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(Vec best, double rnorm)
      : std::runtime_error("levenberg_marquardt: no convergence, |r|_inf = " +
                           std::to_string(rnorm)),
        best_(std::move(best)),
        residual_norm_(rnorm) {}
  const Vec& best() const { return best_; }
  double residual_norm() const { return residual_norm_; }

 private:
  Vec best_;
  double residual_norm_;
};

/// Levenberg-Marquardt with a forward-difference Jacobian.  Returns x with
/// |residual(x)|_inf <= opts.residual_tol or throws NonConvergence carrying
/// the best iterate.
template <typename F>
Vec levenberg_marquardt(F&& residual, Vec x, const LMOptions& opts = {}) {
  require(opts.max_iterations >= 1 && opts.residual_tol > 0.0 && opts.fd_step > 0.0,
          "levenberg_marquardt: bad options");
  require(x.allFinite(), "levenberg_marquardt: non-finite start");
  Vec r = residual(x);
  double lambda = opts.damping_init;
  const int nvar = static_cast<int>(x.size());
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (r.lpNorm<Eigen::Infinity>() <= opts.residual_tol) return x;
    Eigen::MatrixXd J(r.size(), nvar);
    for (int j = 0; j < nvar; ++j) {
      const double h = opts.fd_step * std::max(1.0, std::abs(x[j]));
      Vec xp = x;
      xp[j] += h;
      J.col(j) = (residual(xp) - r) / h;
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Vec g = J.transpose() * r;
    bool accepted = false;
    for (int trial = 0; trial < 60 && !accepted; ++trial) {
      Eigen::MatrixXd H = JtJ;
      for (int j = 0; j < nvar; ++j)
        H(j, j) += lambda * std::max(JtJ(j, j), 1e-12);
      const Vec step = H.ldlt().solve(-g);
      const Vec xt = x + step;
      const Vec rt = residual(xt);
      if (rt.allFinite() && rt.squaredNorm() < r.squaredNorm()) {
        x = xt;
        r = rt;
        lambda = std::max(lambda / opts.damping_shrink, 1e-14);
        accepted = true;
      } else {
        lambda *= opts.damping_grow;
        if (lambda > 1e15) break;
      }
    }
    if (!accepted) break;  // stuck; fall through to the convergence check
  }
  if (r.lpNorm<Eigen::Infinity>() <= opts.residual_tol) return x;
  throw NonConvergence(x, r.lpNorm<Eigen::Infinity>());
}

/// Eigenvalues of a general square real matrix (LAPACK dgeev).
inline CVec eig_general(const Mat& A) {
  require(A.rows() == A.cols(), "eig_general: matrix must be square");
  require(A.allFinite(), "eig_general: non-finite input");
  const int n = static_cast<int>(A.rows());
  Mat work = A;
  std::vector<double> wr(n), wi(n);
  // column-major view of the row-major buffer is A^T: same spectrum, no copy
  const int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                    wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("eig_general: dgeev failed");
  CVec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = {wr[i], wi[i]};
  return ev;
}

/// Eigenvalues of a symmetric matrix, ascending.
inline Vec eig_symmetric(const Mat& A) {
  require(A.rows() == A.cols(), "eig_symmetric: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace sbp
