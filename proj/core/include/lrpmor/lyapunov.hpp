#pragma once

#include "lrpmor/types.hpp"

namespace lrpmor {

/// Dense Lyapunov solves for a fixed stable pencil (A, E).
///
/// Holds one Schur decomposition (of E^{-1}A when E is well conditioned,
/// otherwise the generalized real Schur form of the pencil) and reuses it for
/// any number of right-hand sides, in both the primal and the dual equation:
///
///   solve(Q):       A P E^T + E P A^T + Q = 0
///   solve_dual(Q):  A^T X E + E^T X A + Q = 0
///
/// The constructor throws SingularE when E is numerically singular and
/// UnstablePencil when the pencil has an eigenvalue with nonnegative real
/// part. All methods are const and safe to call concurrently.
class LyapunovSolver {
public:
  LyapunovSolver(const Mat& a, const Mat& e);

  Mat solve(const Mat& q) const;
  Mat solve_dual(const Mat& q) const;

  const CVec& pencil_eigenvalues() const { return eigs_; }
  double spectral_abscissa() const;
  Index order() const { return n_; }

private:
  Mat solve_folded(const Mat& q, bool dual) const;
  Mat solve_generalized(const Mat& q, bool dual) const;

  Index n_ = 0;
  bool identity_e_ = false;
  bool use_qz_ = false;

  // folded standard form: E^{-1}A = U T U^T, plus the flipped pair realizing
  // the transposed Schur form for the dual equation
  Mat schur_u_, schur_t_;
  Mat schur_u_flip_, schur_t_flip_;
  Eigen::PartialPivLU<Mat> lu_e_;

  // generalized form: A = Q S Z, E = Q T Z with S quasi-upper, T upper
  Mat qz_q_, qz_z_, qz_s_, qz_t_;
  Mat qz_s_flip_, qz_t_flip_;

  CVec eigs_;
};

/// One-shot convenience wrapper around LyapunovSolver::solve.
Mat solve_lyapunov(const Mat& a, const Mat& e, const Mat& q);

} // namespace lrpmor
