#pragma once

#include <optional>

#include "lrpmor/lyapunov.hpp"
#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

struct BTResult {
  StateSpaceSystem reduced; // identity E
  Vec hsv;                  // all n Hankel values, nonincreasing
  Index order = 0;
  double error_bound = 0.0; // 2 * sum of truncated Hankel values
};

/// Either a fixed reduced order or an error-bound tolerance: with a
/// tolerance, the order is the smallest r with 2 * sum_{i>r} hsv_i <= tol.
struct BTTarget {
  std::optional<Index> order;
  std::optional<double> tolerance;

  static BTTarget by_order(Index r) { return BTTarget{r, std::nullopt}; }
  static BTTarget by_tolerance(double tol) { return BTTarget{std::nullopt, tol}; }
};

/// Square-root balanced truncation factors of one system, reusable across
/// truncation targets: changing the target only changes how many columns of
/// the already-computed balancing SVD are kept.
///
/// Gramian square factors come from symmetric eigendecompositions (robust to
/// numerically semidefinite Gramians); E is folded into the cross-product SVD
/// so reduced systems always carry identity E. Truncation never splits a
/// cluster of equal Hankel values: the returned order may exceed the request
/// by the cluster remainder. Requested orders above the numerical Hankel rank
/// are clamped down to it.
class BTFactors {
public:
  explicit BTFactors(const StateSpaceSystem& sys);
  BTFactors(const Mat& a, const Mat& e, const Mat& b, const Mat& c,
            const LyapunovSolver& shared_solver);

  BTResult truncate(const BTTarget& target) const;

  const Vec& hankel_values() const { return hsv_full_; } // length n
  Index max_order() const { return rank_; }
  Index full_order() const { return a_.rows(); }

  /// Smallest order meeting 2 * tail sum <= tol (before cluster extension).
  Index order_for_tolerance(double tol) const;

private:
  void factorize(const Mat& b, const Mat& c, const Mat& e, const LyapunovSolver& solver);

  Mat a_, b_, c_;
  Mat zp_, zq_;       // Gramian square factors P = Zp Zp^T, Q = Zq Zq^T
  Mat svd_u_, svd_v_; // SVD of Zq^T E Zp
  Vec sv_;
  Vec hsv_full_;
  Index rank_ = 0;
};

/// Controllability and observability Gramians: P solves
/// A P E^T + E P A^T + B B^T = 0 and X solves A^T X E + E^T X A + C^T C = 0.
std::pair<Mat, Mat> gramians(const StateSpaceSystem& sys);

/// sqrt of the eigenvalues of P E^T Q E, sorted nonincreasing, negatives
/// clipped to zero; computed through symmetric square factors.
Vec hankel_singular_values(const Mat& p, const Mat& q, const Mat& e);

BTResult balanced_truncation(const StateSpaceSystem& sys, const BTTarget& target);

} // namespace lrpmor
