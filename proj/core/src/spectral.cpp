#include "lrpmor/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lrpmor/errors.hpp"

namespace lrpmor {

namespace {

// Hager's algorithm: estimates ||A^{-1}||_1 from a handful of solves with the
// factored matrix and its transpose.
double inverse_norm1_estimate(const Eigen::PartialPivLU<Mat>& lu, Index n) {
  if (n == 0) return 0.0;
  Vec x = Vec::Constant(n, 1.0 / static_cast<double>(n));
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    Vec y = lu.solve(x);
    if (!y.allFinite()) return std::numeric_limits<double>::infinity();
    est = y.lpNorm<1>();
    Vec xi(n);
    for (Index i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
    Vec z = lu.transpose().solve(xi);
    if (!z.allFinite()) return std::numeric_limits<double>::infinity();
    Index j;
    double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  return est;
}

} // namespace

double condition_estimate(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("condition_estimate: matrix must be square");
  if (a.rows() == 0) return 1.0;
  const double anorm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (anorm == 0.0) return std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Mat> lu(a);
  return anorm * inverse_norm1_estimate(lu, a.rows());
}

double singular_e_threshold() {
  return 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
}

void require_invertible_e(const Mat& e, const char* context) {
  const double cond = condition_estimate(e);
  if (!(cond < singular_e_threshold())) {
    throw SingularE(std::string(context) + ": E is numerically singular (cond estimate " +
                    std::to_string(cond) + ")");
  }
}

CVec eigenvalues(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (a.rows() == 0) return CVec();
  Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

CVec eigenvalues(const Mat& a, const Mat& e) {
  if (a.rows() != a.cols() || e.rows() != e.cols() || a.rows() != e.rows())
    throw std::invalid_argument("eigenvalues: A and E must be square of equal size");
  if (e.isIdentity(0.0)) return eigenvalues(a);
  require_invertible_e(e, "eigenvalues");
  Eigen::PartialPivLU<Mat> lu(e);
  return eigenvalues(lu.solve(a));
}

double max_real_part(const CVec& eigs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < eigs.size(); ++i) worst = std::max(worst, eigs[i].real());
  return worst;
}

Mat sqrt_spd(const Mat& msym) {
  if (msym.rows() != msym.cols()) throw std::invalid_argument("sqrt_spd: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(msym);
  if (es.info() != Eigen::Success) throw Error("sqrt_spd: eigendecomposition failed");
  const Vec& lam = es.eigenvalues();
  if (lam.size() > 0 && lam.minCoeff() <= 0.0) {
    throw NotSPD("sqrt_spd: smallest eigenvalue " + std::to_string(lam.minCoeff()) +
                 " is not positive");
  }
  Mat s = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

} // namespace lrpmor
