#include "lrpmor/lyapunov.hpp"

#include <limits>
#include <string>
#include <vector>

#include "lrpmor/errors.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

namespace {

constexpr double kFoldConditionLimit = 1e6;

struct Block {
  Index start;
  Index size; // 1 or 2
};

// Diagonal block structure of a real quasi-triangular matrix.
std::vector<Block> diagonal_blocks(const Mat& t) {
  std::vector<Block> blocks;
  const Index n = t.rows();
  Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

Mat kron_small(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Solves Tii X + X Tjj^T = rhs for blocks of size <= 2.
Mat solve_small_sylvester(const Mat& tii, const Mat& tjj, const Mat& rhs) {
  const Index ni = tii.rows();
  const Index nj = tjj.rows();
  Mat m = kron_small(Mat::Identity(nj, nj), tii) + kron_small(tjj, Mat::Identity(ni, ni));
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible())
    throw Error("lyapunov: singular diagonal block system (eigenvalue sum near zero)");
  Vec rhs_vec = Eigen::Map<const Vec>(rhs.data(), rhs.size());
  Vec x = lu.solve(rhs_vec);
  return Eigen::Map<const Mat>(x.data(), ni, nj);
}

// Solves Sii X Tjj^T + Tii X Sjj^T = rhs for blocks of size <= 2.
Mat solve_small_generalized(const Mat& sii, const Mat& tii, const Mat& sjj, const Mat& tjj,
                            const Mat& rhs) {
  const Index ni = sii.rows();
  const Index nj = sjj.rows();
  Mat m = kron_small(tjj, sii) + kron_small(sjj, tii);
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible())
    throw Error("lyapunov: singular diagonal block system in generalized solve");
  Vec rhs_vec = Eigen::Map<const Vec>(rhs.data(), rhs.size());
  Vec x = lu.solve(rhs_vec);
  return Eigen::Map<const Mat>(x.data(), ni, nj);
}

// Back-substitution for T Y + Y T^T = R with T quasi-upper-triangular.
Mat solve_schur_core(const Mat& t, const Mat& r) {
  const Index n = t.rows();
  const auto blocks = diagonal_blocks(t);
  Mat y = Mat::Zero(n, n);
  for (Index jb = static_cast<Index>(blocks.size()) - 1; jb >= 0; --jb) {
    const Index j0 = blocks[jb].start;
    const Index nj = blocks[jb].size;
    const Index jend = j0 + nj;
    Mat rj = r.middleCols(j0, nj);
    if (jend < n)
      rj.noalias() -= y.rightCols(n - jend) * t.block(j0, jend, nj, n - jend).transpose();
    for (Index ib = static_cast<Index>(blocks.size()) - 1; ib >= 0; --ib) {
      const Index i0 = blocks[ib].start;
      const Index ni = blocks[ib].size;
      const Index iend = i0 + ni;
      Mat rhs = rj.middleRows(i0, ni);
      if (iend < n)
        rhs.noalias() -= t.block(i0, iend, ni, n - iend) * y.block(iend, j0, n - iend, nj);
      y.block(i0, j0, ni, nj) =
          solve_small_sylvester(t.block(i0, i0, ni, ni), t.block(j0, j0, nj, nj), rhs);
    }
  }
  return y;
}

// Back-substitution for S Y T^T + T Y S^T = R with S quasi-upper and T upper
// triangular (generalized real Schur pair).
Mat solve_qz_core(const Mat& s, const Mat& t, const Mat& r) {
  const Index n = s.rows();
  const auto blocks = diagonal_blocks(s);
  Mat y = Mat::Zero(n, n);
  for (Index jb = static_cast<Index>(blocks.size()) - 1; jb >= 0; --jb) {
    const Index j0 = blocks[jb].start;
    const Index nj = blocks[jb].size;
    const Index jend = j0 + nj;
    const Mat sjj = s.block(j0, j0, nj, nj);
    const Mat tjj = t.block(j0, j0, nj, nj);
    // contributions of already-solved block columns
    Mat w1 = Mat::Zero(n, nj); // Y(:, >j) T(j, >j)^T
    Mat w2 = Mat::Zero(n, nj); // Y(:, >j) S(j, >j)^T
    if (jend < n) {
      w1.noalias() = y.rightCols(n - jend) * t.block(j0, jend, nj, n - jend).transpose();
      w2.noalias() = y.rightCols(n - jend) * s.block(j0, jend, nj, n - jend).transpose();
    }
    for (Index ib = static_cast<Index>(blocks.size()) - 1; ib >= 0; --ib) {
      const Index i0 = blocks[ib].start;
      const Index ni = blocks[ib].size;
      const Index iend = i0 + ni;
      Mat rhs = r.block(i0, j0, ni, nj);
      rhs.noalias() -= s.block(i0, i0, ni, n - i0) * w1.bottomRows(n - i0);
      rhs.noalias() -= t.block(i0, i0, ni, n - i0) * w2.bottomRows(n - i0);
      if (iend < n) {
        rhs.noalias() -=
            (s.block(i0, iend, ni, n - iend) * y.block(iend, j0, n - iend, nj)) * tjj.transpose();
        rhs.noalias() -=
            (t.block(i0, iend, ni, n - iend) * y.block(iend, j0, n - iend, nj)) * sjj.transpose();
      }
      y.block(i0, j0, ni, nj) =
          solve_small_generalized(s.block(i0, i0, ni, ni), t.block(i0, i0, ni, ni), sjj, tjj, rhs);
    }
  }
  return y;
}

// Flip a quasi-triangular factor so that its transpose becomes quasi-upper
// triangular again: T' = J T^T J with J the reversal permutation.
Mat flip_transpose(const Mat& t) { return t.transpose().reverse(); }

CVec schur_eigenvalues(const Mat& t) {
  const auto blocks = diagonal_blocks(t);
  CVec eigs(t.rows());
  Index pos = 0;
  for (const auto& b : blocks) {
    if (b.size == 1) {
      eigs[pos++] = Complex(t(b.start, b.start), 0.0);
    } else {
      const double a = t(b.start, b.start);
      const double bb = t(b.start, b.start + 1);
      const double c = t(b.start + 1, b.start);
      const double d = t(b.start + 1, b.start + 1);
      const double tr = a + d;
      const double disc = (a - d) * (a - d) + 4.0 * bb * c;
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        eigs[pos++] = Complex(0.5 * (tr + root), 0.0);
        eigs[pos++] = Complex(0.5 * (tr - root), 0.0);
      } else {
        const double root = std::sqrt(-disc);
        eigs[pos++] = Complex(0.5 * tr, 0.5 * root);
        eigs[pos++] = Complex(0.5 * tr, -0.5 * root);
      }
    }
  }
  return eigs;
}

CVec qz_eigenvalues(const Mat& s, const Mat& t) {
  const auto blocks = diagonal_blocks(s);
  CVec eigs(s.rows());
  Index pos = 0;
  for (const auto& b : blocks) {
    if (b.size == 1) {
      eigs[pos++] = Complex(s(b.start, b.start) / t(b.start, b.start), 0.0);
    } else {
      // det(S - lam T) = 0 on the 2x2 block, with T upper triangular
      const Index i = b.start;
      const double a2 = t(i, i) * t(i + 1, i + 1);
      const double a1 = -(s(i, i) * t(i + 1, i + 1) + s(i + 1, i + 1) * t(i, i) -
                          s(i + 1, i) * t(i, i + 1));
      const double a0 = s(i, i) * s(i + 1, i + 1) - s(i + 1, i) * s(i, i + 1);
      const Complex disc = std::sqrt(Complex(a1 * a1 - 4.0 * a2 * a0, 0.0));
      eigs[pos++] = (-a1 + disc) / (2.0 * a2);
      eigs[pos++] = (-a1 - disc) / (2.0 * a2);
    }
  }
  return eigs;
}

} // namespace

LyapunovSolver::LyapunovSolver(const Mat& a, const Mat& e) {
  if (a.rows() != a.cols() || e.rows() != e.cols() || a.rows() != e.rows())
    throw std::invalid_argument("LyapunovSolver: A and E must be square of equal size");
  n_ = a.rows();
  if (n_ == 0) return;

  identity_e_ = e.isIdentity(0.0);
  double cond_e = 1.0;
  if (!identity_e_) {
    cond_e = condition_estimate(e);
    if (!(cond_e < singular_e_threshold()))
      throw SingularE("LyapunovSolver: E is numerically singular (cond estimate " +
                      std::to_string(cond_e) + ")");
  }
  use_qz_ = !identity_e_ && cond_e >= kFoldConditionLimit;

  if (!use_qz_) {
    Mat a_folded;
    if (identity_e_) {
      a_folded = a;
    } else {
      lu_e_.compute(e);
      a_folded = lu_e_.solve(a);
    }
    Eigen::RealSchur<Mat> schur(a_folded);
    if (schur.info() != Eigen::Success) throw Error("LyapunovSolver: Schur decomposition failed");
    schur_u_ = schur.matrixU();
    schur_t_ = schur.matrixT();
    schur_u_flip_ = schur_u_.rowwise().reverse();
    schur_t_flip_ = flip_transpose(schur_t_);
    eigs_ = schur_eigenvalues(schur_t_);
  } else {
    Eigen::RealQZ<Mat> qz(a, e);
    if (qz.info() != Eigen::Success) throw Error("LyapunovSolver: QZ decomposition failed");
    qz_q_ = qz.matrixQ();
    qz_z_ = qz.matrixZ();
    qz_s_ = qz.matrixS();
    qz_t_ = qz.matrixT();
    qz_s_flip_ = flip_transpose(qz_s_);
    qz_t_flip_ = flip_transpose(qz_t_);
    eigs_ = qz_eigenvalues(qz_s_, qz_t_);
  }

  const double abscissa = max_real_part(eigs_);
  if (!(abscissa < 0.0))
    throw UnstablePencil("LyapunovSolver: pencil has an eigenvalue with real part " +
                         std::to_string(abscissa));
}

double LyapunovSolver::spectral_abscissa() const { return max_real_part(eigs_); }

Mat LyapunovSolver::solve(const Mat& q) const {
  if (q.rows() != n_ || q.cols() != n_)
    throw std::invalid_argument("LyapunovSolver::solve: Q has wrong dimensions");
  if (n_ == 0) return Mat();
  Mat p = use_qz_ ? solve_generalized(q, false) : solve_folded(q, false);
  return 0.5 * (p + p.transpose());
}

Mat LyapunovSolver::solve_dual(const Mat& q) const {
  if (q.rows() != n_ || q.cols() != n_)
    throw std::invalid_argument("LyapunovSolver::solve_dual: Q has wrong dimensions");
  if (n_ == 0) return Mat();
  Mat x = use_qz_ ? solve_generalized(q, true) : solve_folded(q, true);
  return 0.5 * (x + x.transpose());
}

Mat LyapunovSolver::solve_folded(const Mat& q, bool dual) const {
  if (!dual) {
    // Atil P + P Atil^T + E^{-1} Q E^{-T} = 0
    Mat q_folded = q;
    if (!identity_e_) {
      q_folded = lu_e_.solve(q);
      Mat qt = q_folded.transpose();
      qt = lu_e_.solve(qt);
      q_folded = qt.transpose();
    }
    Mat c = -(schur_u_.transpose() * q_folded * schur_u_);
    Mat y = solve_schur_core(schur_t_, c);
    return schur_u_ * y * schur_u_.transpose();
  }
  // Atil^T Y + Y Atil + Q = 0 with Y = E^T X E, using the flipped Schur pair
  Mat c = -(schur_u_flip_.transpose() * q * schur_u_flip_);
  Mat y = solve_schur_core(schur_t_flip_, c);
  Mat x = schur_u_flip_ * y * schur_u_flip_.transpose();
  if (!identity_e_) {
    x = lu_e_.transpose().solve(x);
    Mat xt = x.transpose();
    xt = lu_e_.transpose().solve(xt);
    x = xt.transpose();
  }
  return x;
}

Mat LyapunovSolver::solve_generalized(const Mat& q, bool dual) const {
  if (!dual) {
    // S Y T^T + T Y S^T = -Q^T Q_rhs Q ; P = Z^T Y Z
    Mat c = -(qz_q_.transpose() * q * qz_q_);
    Mat y = solve_qz_core(qz_s_, qz_t_, c);
    return qz_z_.transpose() * y * qz_z_;
  }
  // S^T Y T + T^T Y S = -Z Q_rhs Z^T, flipped into quasi-upper form
  Mat c = -(qz_z_ * q * qz_z_.transpose());
  c = c.reverse().eval(); // J C J
  Mat y_flip = solve_qz_core(qz_s_flip_, qz_t_flip_, c);
  Mat y = y_flip.reverse();
  return qz_q_ * y * qz_q_.transpose();
}

Mat solve_lyapunov(const Mat& a, const Mat& e, const Mat& q) {
  return LyapunovSolver(a, e).solve(q);
}

} // namespace lrpmor
