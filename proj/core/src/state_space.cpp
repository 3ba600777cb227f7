#include "lrpmor/state_space.hpp"

#include <limits>
#include <sstream>

#include "lrpmor/errors.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

StateSpaceSystem::StateSpaceSystem(Mat e, Mat a, Mat b, Mat c, bool validate)
    : E(std::move(e)), A(std::move(a)), B(std::move(b)), C(std::move(c)) {
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || B.rows() != n || C.cols() != n) {
    std::ostringstream msg;
    msg << "StateSpaceSystem: inconsistent dimensions (E " << E.rows() << "x" << E.cols() << ", A "
        << A.rows() << "x" << A.cols() << ", B " << B.rows() << "x" << B.cols() << ", C "
        << C.rows() << "x" << C.cols() << ")";
    throw std::invalid_argument(msg.str());
  }
  identity_e_ = E.isIdentity(0.0);
  if (validate && !identity_e_ && n > 0) require_invertible_e(E, "StateSpaceSystem");
}

StateSpaceSystem StateSpaceSystem::with_identity_e(Mat a, Mat b, Mat c) {
  const Index n = a.rows();
  return StateSpaceSystem(Mat::Identity(n, n), std::move(a), std::move(b), std::move(c), false);
}

CMat eval_transfer(const StateSpaceSystem& sys, Complex s) {
  const Index n = sys.order();
  if (n == 0) return CMat::Zero(sys.num_outputs(), sys.num_inputs());
  CMat shifted = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  Eigen::PartialPivLU<CMat> lu(shifted);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  if (dmin <= static_cast<double>(n) * std::numeric_limits<double>::epsilon() * dmax) {
    std::ostringstream msg;
    msg << "eval_transfer: sE - A is numerically singular at s = (" << s.real() << ", " << s.imag()
        << ")";
    throw ResolventSingular(msg.str());
  }
  return sys.C.cast<Complex>() * lu.solve(sys.B.cast<Complex>());
}

} // namespace lrpmor
