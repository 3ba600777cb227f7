#include "lrpmor/balanced_truncation.hpp"

#include <algorithm>
#include <string>

#include "lrpmor/errors.hpp"

namespace lrpmor {

namespace {

constexpr double kHsvZeroRel = 1e-14;   // values below this times hsv[0] count as zero
constexpr double kClusterRel = 1e-9;    // relative gap below which values form a cluster

// Square factor Z with Z Z^T = M for a symmetric PSD matrix, dropping the
// numerically nonpositive part of the spectrum.
Mat psd_factor(const Mat& m) {
  if (m.size() == 0) return Mat(m.rows(), 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw Error("balanced_truncation: eigendecomposition failed");
  const Vec& lam = es.eigenvalues(); // ascending
  const double lmax = lam.size() > 0 ? lam(lam.size() - 1) : 0.0;
  const double cut = std::max(0.0, lmax) * 1e-14;
  Index kept = 0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cut) ++kept;
  Mat z(m.rows(), kept);
  Index col = 0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cut) z.col(col++) = es.eigenvectors().col(i) * std::sqrt(lam(i));
  return z;
}

Vec pad_clip(const Vec& sv, Index n) {
  Vec hsv = Vec::Zero(n);
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  for (Index i = 0; i < sv.size() && i < n; ++i)
    hsv(i) = (sv(i) > kHsvZeroRel * top) ? sv(i) : 0.0;
  return hsv;
}

} // namespace

std::pair<Mat, Mat> gramians(const StateSpaceSystem& sys) {
  LyapunovSolver solver(sys.A, sys.E);
  Mat p = solver.solve(sys.B * sys.B.transpose());
  Mat x = solver.solve_dual(sys.C.transpose() * sys.C);
  return {std::move(p), std::move(x)};
}

Vec hankel_singular_values(const Mat& p, const Mat& q, const Mat& e) {
  if (p.rows() != q.rows() || p.rows() != e.rows())
    throw std::invalid_argument("hankel_singular_values: dimension mismatch");
  Mat zp = psd_factor(p);
  Mat zq = psd_factor(q);
  Eigen::BDCSVD<Mat> svd(zq.transpose() * e * zp);
  return pad_clip(svd.singularValues(), p.rows());
}

BTFactors::BTFactors(const StateSpaceSystem& sys) : a_(sys.A), b_(sys.B), c_(sys.C) {
  LyapunovSolver solver(sys.A, sys.E);
  factorize(sys.B, sys.C, sys.E, solver);
}

BTFactors::BTFactors(const Mat& a, const Mat& e, const Mat& b, const Mat& c,
                     const LyapunovSolver& shared_solver)
    : a_(a), b_(b), c_(c) {
  factorize(b, c, e, shared_solver);
}

void BTFactors::factorize(const Mat& b, const Mat& c, const Mat& e,
                          const LyapunovSolver& solver) {
  zp_ = psd_factor(solver.solve(b * b.transpose()));
  zq_ = psd_factor(solver.solve_dual(c.transpose() * c));
  Eigen::BDCSVD<Mat> svd(zq_.transpose() * e * zp_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  sv_ = svd.singularValues();
  svd_u_ = svd.matrixU();
  svd_v_ = svd.matrixV();
  hsv_full_ = pad_clip(sv_, a_.rows());
  rank_ = 0;
  const double top = sv_.size() > 0 ? sv_(0) : 0.0;
  for (Index i = 0; i < sv_.size(); ++i)
    if (sv_(i) > kHsvZeroRel * top) ++rank_;
}

Index BTFactors::order_for_tolerance(double tol) const {
  if (!(tol >= 0.0)) throw std::invalid_argument("balanced_truncation: tolerance must be >= 0");
  const Index n = hsv_full_.size();
  double tail = 2.0 * hsv_full_.sum();
  Index r = 0;
  while (r < rank_ && tail > tol) {
    tail -= 2.0 * hsv_full_(r);
    ++r;
  }
  if (r == 0 && rank_ > 0) r = 1;
  return r;
}

BTResult BTFactors::truncate(const BTTarget& target) const {
  const Index n = a_.rows();
  Index r = 0;
  if (target.order.has_value() == target.tolerance.has_value())
    throw std::invalid_argument("balanced_truncation: exactly one of order/tolerance required");
  if (target.order) {
    r = *target.order;
    if (r < 1 || r > n)
      throw OrderTooLarge("balanced_truncation: requested order " + std::to_string(r) +
                          " outside [1, " + std::to_string(n) + "]");
    r = std::min(r, rank_);
  } else {
    r = order_for_tolerance(*target.tolerance);
  }

  // never split a cluster of (numerically) equal Hankel values
  while (r > 0 && r < rank_ && sv_(r) > (1.0 - kClusterRel) * sv_(r - 1)) ++r;

  double bound = 0.0;
  for (Index i = r; i < n; ++i) bound += 2.0 * hsv_full_(i);

  BTResult result;
  result.hsv = hsv_full_;
  result.order = r;
  result.error_bound = bound;
  if (r == 0) {
    result.reduced = StateSpaceSystem::with_identity_e(Mat(0, 0), Mat(0, b_.cols()),
                                                       Mat(c_.rows(), 0));
    return result;
  }
  const Vec scale = sv_.head(r).cwiseSqrt().cwiseInverse();
  Mat w = zq_ * svd_u_.leftCols(r) * scale.asDiagonal();  // left projector
  Mat t = zp_ * svd_v_.leftCols(r) * scale.asDiagonal();  // right projector
  result.reduced = StateSpaceSystem::with_identity_e(w.transpose() * a_ * t, w.transpose() * b_,
                                                     c_ * t);
  return result;
}

BTResult balanced_truncation(const StateSpaceSystem& sys, const BTTarget& target) {
  return BTFactors(sys).truncate(target);
}

} // namespace lrpmor
