#pragma once

#include <vector>

#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

/// How the parameter vector enters the diagonal coupling matrix.
///
/// NonnegativeSqrt: the coupling is D(p) = diag(sqrt(p_i)) applied
/// symmetrically on both sides of the k x k solve; parameters must be >= 0.
/// General: the coupling is diag(p_i) applied once (asymmetric form); any
/// real parameters are admissible. The two evaluations agree for p >= 0.
enum class ParamMode { NonnegativeSqrt, General };

/// LTI family E x' = (A0 - U diag(q) V^T) x + B w, y = C x, where the
/// internal slot vector q of length k is an expansion of the exposed
/// parameter vector p via slot_of_param (several slots may share one exposed
/// parameter, as in models whose parameters enter with multiplicity).
struct LowRankParametricSystem {
  Mat E, A0, U, V, B, C;
  ParamMode mode = ParamMode::General;
  std::vector<Index> slot_of_param; // size k; entry = exposed parameter index
  Index num_params = 0;

  Index order() const { return A0.rows(); }
  Index k_internal() const { return U.cols(); }
  Index num_inputs() const { return B.cols(); }
  Index num_outputs() const { return C.rows(); }

  /// Expands the exposed parameter vector onto the internal slots. Checks
  /// nonnegativity in NonnegativeSqrt mode (throws NegativeParameter).
  Vec expand_params(const Vec& p) const;

  /// Dense state matrix A0 - U diag(q) V^T at the given exposed parameters.
  Mat state_matrix(const Vec& p) const;

  /// Fills slot_of_param with the identity map and sets num_params = k.
  void use_identity_slots();

  void validate() const;
};

/// The four parameter-independent subsystems sharing the pencil (E, A0):
/// h1 = (B, C), h2 = (U, C), h3 = (U, V^T), h4 = (B, V^T).
struct SubsystemQuartet {
  StateSpaceSystem h1, h2, h3, h4;
};

SubsystemQuartet subsystems(const LowRankParametricSystem& psys);

/// Reference evaluation: assembles A(p) densely and solves with the full
/// shifted pencil.
CMat eval_parametric_direct(const LowRankParametricSystem& psys, Complex s, const Vec& p);

/// Low-rank-update evaluation from the four subsystem values at a fixed s.
/// `slots` is the internal slot vector (length k); cost is independent of the
/// full order. Throws CouplingSingular when the k x k middle matrix is
/// numerically singular and NegativeParameter for slots < 0 in sqrt mode.
CMat eval_parametric_smw(const CMat& h1, const CMat& h2, const CMat& h3, const CMat& h4,
                         const Vec& slots, ParamMode mode);

} // namespace lrpmor
