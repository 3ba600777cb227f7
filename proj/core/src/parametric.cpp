#include "lrpmor/parametric.hpp"

#include <sstream>

#include "lrpmor/errors.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

void LowRankParametricSystem::use_identity_slots() {
  slot_of_param.resize(static_cast<size_t>(k_internal()));
  for (Index i = 0; i < k_internal(); ++i) slot_of_param[static_cast<size_t>(i)] = i;
  num_params = k_internal();
}

void LowRankParametricSystem::validate() const {
  const Index n = order();
  if (A0.cols() != n || E.rows() != n || E.cols() != n || U.rows() != n || V.rows() != n ||
      B.rows() != n || C.cols() != n || U.cols() != V.cols())
    throw std::invalid_argument("LowRankParametricSystem: inconsistent dimensions");
  if (static_cast<Index>(slot_of_param.size()) != k_internal())
    throw std::invalid_argument("LowRankParametricSystem: slot map size must equal k");
  for (Index slot : slot_of_param)
    if (slot < 0 || slot >= num_params)
      throw std::invalid_argument("LowRankParametricSystem: slot map entry out of range");
  if (n > 0) require_invertible_e(E, "LowRankParametricSystem");
}

Vec LowRankParametricSystem::expand_params(const Vec& p) const {
  if (p.size() != num_params) {
    std::ostringstream msg;
    msg << "expand_params: expected " << num_params << " parameters, got " << p.size();
    throw std::invalid_argument(msg.str());
  }
  if (mode == ParamMode::NonnegativeSqrt && p.size() > 0 && p.minCoeff() < 0.0)
    throw NegativeParameter("expand_params: negative parameter in square-root mode");
  Vec slots(k_internal());
  for (Index i = 0; i < k_internal(); ++i) slots[i] = p[slot_of_param[static_cast<size_t>(i)]];
  return slots;
}

Mat LowRankParametricSystem::state_matrix(const Vec& p) const {
  const Vec slots = expand_params(p);
  return A0 - U * slots.asDiagonal() * V.transpose();
}

SubsystemQuartet subsystems(const LowRankParametricSystem& psys) {
  SubsystemQuartet q;
  q.h1 = StateSpaceSystem(psys.E, psys.A0, psys.B, psys.C, false);
  q.h2 = StateSpaceSystem(psys.E, psys.A0, psys.U, psys.C, false);
  q.h3 = StateSpaceSystem(psys.E, psys.A0, psys.U, psys.V.transpose(), false);
  q.h4 = StateSpaceSystem(psys.E, psys.A0, psys.B, psys.V.transpose(), false);
  return q;
}

CMat eval_parametric_direct(const LowRankParametricSystem& psys, Complex s, const Vec& p) {
  StateSpaceSystem assembled(psys.E, psys.state_matrix(p), psys.B, psys.C, false);
  return eval_transfer(assembled, s);
}

CMat eval_parametric_smw(const CMat& h1, const CMat& h2, const CMat& h3, const CMat& h4,
                         const Vec& slots, ParamMode mode) {
  const Index k = h3.rows();
  if (h3.cols() != k || h2.cols() != k || h4.rows() != k || h1.rows() != h2.rows() ||
      h1.cols() != h4.cols())
    throw std::invalid_argument("eval_parametric_smw: inconsistent quartet dimensions");
  if (slots.size() != k)
    throw std::invalid_argument("eval_parametric_smw: slot vector must have length k");
  if (k == 0) return h1;

  CMat middle(k, k);
  CMat right(k, h4.cols());
  CVec left_scale(k);
  if (mode == ParamMode::NonnegativeSqrt) {
    if (slots.minCoeff() < 0.0)
      throw NegativeParameter("eval_parametric_smw: negative parameter in square-root mode");
    const CVec d = slots.cwiseSqrt().cast<Complex>();
    middle = CMat::Identity(k, k) + d.asDiagonal() * h3 * d.asDiagonal();
    right = d.asDiagonal() * h4;
    left_scale = d;
  } else {
    const CVec d = slots.cast<Complex>();
    middle = CMat::Identity(k, k) + h3 * d.asDiagonal();
    right = h4;
    left_scale = d;
  }
  Eigen::FullPivLU<CMat> lu(middle);
  if (!lu.isInvertible())
    throw CouplingSingular("eval_parametric_smw: I + D H3 D coupling matrix is singular");
  return h1 - h2 * left_scale.asDiagonal() * lu.solve(right);
}

} // namespace lrpmor
