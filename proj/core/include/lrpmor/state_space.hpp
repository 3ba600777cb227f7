#pragma once

#include "lrpmor/types.hpp"

namespace lrpmor {

/// Dense LTI realization  E x' = A x + B w,  y = C x.
///
/// E must be invertible; the validating constructor enforces this with a
/// 1-norm condition estimate. Instances are immutable by convention after
/// construction and safe to share across threads.
struct StateSpaceSystem {
  Mat E, A, B, C;

  StateSpaceSystem() = default;
  StateSpaceSystem(Mat e, Mat a, Mat b, Mat c, bool validate = true);

  /// Realization with E = I; skips the invertibility check.
  static StateSpaceSystem with_identity_e(Mat a, Mat b, Mat c);

  Index order() const { return A.rows(); }       // n
  Index num_inputs() const { return B.cols(); }  // m
  Index num_outputs() const { return C.rows(); } // l
  bool has_identity_e() const { return identity_e_; }

private:
  bool identity_e_ = false;
};

/// Transfer function value C (sE - A)^{-1} B from one LU factorization of the
/// shifted pencil. Throws ResolventSingular when s is (numerically) a pole.
CMat eval_transfer(const StateSpaceSystem& sys, Complex s);

} // namespace lrpmor
