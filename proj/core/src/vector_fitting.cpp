#include "lrpmor/vector_fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lrpmor/errors.hpp"
#include "lrpmor/norms.hpp"

namespace lrpmor {

void FrequencySampleSet::validate() const {
  if (points.size() != values.size())
    throw std::invalid_argument("FrequencySampleSet: points and values differ in length");
  const Index l = num_outputs();
  const Index m = num_inputs();
  for (const CMat& v : values)
    if (v.rows() != l || v.cols() != m)
      throw std::invalid_argument("FrequencySampleSet: inconsistent value dimensions");
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw std::invalid_argument("FrequencySampleSet: sampling points must be distinct");
}

std::vector<Complex> initial_poles(double omega_min, double omega_max, Index r) {
  if (!(omega_min > 0.0) || !(omega_min < omega_max))
    throw std::invalid_argument("initial_poles: need 0 < omega_min < omega_max");
  if (r < 1) throw std::invalid_argument("initial_poles: r must be >= 1");
  std::vector<Complex> poles;
  poles.reserve(static_cast<size_t>(r));
  if (r % 2 == 1) poles.emplace_back(-std::sqrt(omega_min * omega_max), 0.0);
  const Index npairs = r / 2;
  if (npairs > 0) {
    std::vector<double> omegas;
    if (npairs == 1)
      omegas.push_back(std::sqrt(omega_min * omega_max));
    else
      omegas = log_grid(omega_min, omega_max, npairs);
    for (double w : omegas) {
      poles.emplace_back(-w / 100.0, w);
      poles.emplace_back(-w / 100.0, -w);
    }
  }
  return poles;
}

namespace {

// Canonical pole bookkeeping: real poles plus upper-half-plane pair
// representatives. Column layout of all basis matrices follows this order,
// reals first, then two real basis functions per pair.
struct PoleSet {
  std::vector<double> reals;
  std::vector<Complex> pairs; // Im > 0

  Index count() const { return static_cast<Index>(reals.size() + 2 * pairs.size()); }

  std::vector<Complex> to_list() const {
    std::vector<Complex> list;
    list.reserve(static_cast<size_t>(count()));
    for (double a : reals) list.emplace_back(a, 0.0);
    for (const Complex& a : pairs) {
      list.push_back(a);
      list.push_back(std::conj(a));
    }
    return list;
  }

  static PoleSet from_list(const std::vector<Complex>& list) {
    PoleSet set;
    std::vector<Complex> remaining = list;
    std::sort(remaining.begin(), remaining.end(), [](const Complex& x, const Complex& y) {
      if (x.real() != y.real()) return x.real() < y.real();
      return std::abs(x.imag()) < std::abs(y.imag());
    });
    std::vector<bool> used(remaining.size(), false);
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (used[i]) continue;
      const Complex& a = remaining[i];
      if (a.imag() == 0.0) {
        set.reals.push_back(a.real());
        continue;
      }
      bool matched = false;
      for (size_t j = i + 1; j < remaining.size(); ++j) {
        if (used[j]) continue;
        const Complex& b = remaining[j];
        const double scale = 1.0 + std::abs(a);
        if (std::abs(b.real() - a.real()) <= 1e-12 * scale &&
            std::abs(b.imag() + a.imag()) <= 1e-12 * scale) {
          used[j] = true;
          matched = true;
          break;
        }
      }
      if (!matched)
        throw std::invalid_argument("vector_fit: pole list is not closed under conjugation");
      set.pairs.push_back(Complex(a.real(), std::abs(a.imag())));
    }
    return set;
  }
};

// N x r complex basis: 1/(s-a) for real poles; for each conjugate pair the
// two real-coefficient functions 1/(s-a)+1/(s-conj(a)) and
// i/(s-a)-i/(s-conj(a)).
CMat basis_matrix(const std::vector<Complex>& points, const PoleSet& poles) {
  const Index n = static_cast<Index>(points.size());
  CMat phi(n, poles.count());
  Index col = 0;
  for (double a : poles.reals) {
    for (Index i = 0; i < n; ++i) phi(i, col) = 1.0 / (points[static_cast<size_t>(i)] - a);
    ++col;
  }
  const Complex im(0.0, 1.0);
  for (const Complex& a : poles.pairs) {
    for (Index i = 0; i < n; ++i) {
      const Complex s = points[static_cast<size_t>(i)];
      const Complex r1 = 1.0 / (s - a);
      const Complex r2 = 1.0 / (s - std::conj(a));
      phi(i, col) = r1 + r2;
      phi(i, col + 1) = im * (r1 - r2);
    }
    col += 2;
  }
  return phi;
}

Mat real_split(const CMat& m) {
  Mat out(2 * m.rows(), m.cols());
  out.topRows(m.rows()) = m.real();
  out.bottomRows(m.rows()) = m.imag();
  return out;
}

Vec real_split(const CVec& v) {
  Vec out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

// Denominator realization sigma(s) = 1 + c^T (sI - A)^{-1} b in the shared
// basis ordering; its zeros are eig(A - b c^T).
void sigma_realization(const PoleSet& poles, Mat& a, Vec& b) {
  const Index r = poles.count();
  a = Mat::Zero(r, r);
  b = Vec::Zero(r);
  Index pos = 0;
  for (double p : poles.reals) {
    a(pos, pos) = p;
    b(pos) = 1.0;
    ++pos;
  }
  for (const Complex& p : poles.pairs) {
    a(pos, pos) = p.real();
    a(pos, pos + 1) = p.imag();
    a(pos + 1, pos) = -p.imag();
    a(pos + 1, pos + 1) = p.real();
    b(pos) = 2.0;
    b(pos + 1) = 0.0;
    pos += 2;
  }
}

PoleSet relocate_poles(const PoleSet& poles, const Vec& w) {
  Mat a;
  Vec b;
  sigma_realization(poles, a, b);
  Eigen::EigenSolver<Mat> es(a - b * w.transpose());
  if (es.info() != Eigen::Success) throw DegenerateLS("vector_fit: pole relocation eigensolve failed");
  CVec zeros = es.eigenvalues();
  std::vector<Complex> flipped(static_cast<size_t>(zeros.size()));
  for (Index i = 0; i < zeros.size(); ++i) {
    double re = zeros[i].real();
    const double imag = zeros[i].imag();
    if (re > 0.0) re = -re;
    if (re == 0.0) re = -1e-8 * (1.0 + std::abs(imag));
    flipped[static_cast<size_t>(i)] = Complex(re, imag);
  }
  // eigenvalues of a real matrix come in exact conjugate pairs
  return PoleSet::from_list(flipped);
}

double pole_movement(const std::vector<Complex>& before, const std::vector<Complex>& after) {
  double worst = 0.0;
  for (const Complex& b : after) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Complex& a : before) nearest = std::min(nearest, std::abs(b - a) / (1.0 + std::abs(a)));
    worst = std::max(worst, nearest);
  }
  return worst;
}

struct ChannelData {
  CVec h; // N samples of one (output, input) channel
};

double barycentric_ls_error(const std::vector<Complex>& points,
                            const std::vector<ChannelData>& channels, const CMat& phi,
                            const Mat& coeffs /* r x channels */) {
  double err = 0.0;
  const Index n = static_cast<Index>(points.size());
  for (size_t ch = 0; ch < channels.size(); ++ch) {
    CVec fit = phi * coeffs.col(static_cast<Index>(ch)).cast<Complex>();
    err += (channels[ch].h - fit).squaredNorm();
  }
  (void)n;
  return err;
}

} // namespace

double ls_error(const FrequencySampleSet& samples, const StateSpaceSystem& model) {
  samples.validate();
  if (model.num_outputs() != samples.num_outputs() || model.num_inputs() != samples.num_inputs())
    throw std::invalid_argument("ls_error: model and sample dimensions differ");
  double err = 0.0;
  for (Index i = 0; i < samples.size(); ++i) {
    const CMat diff =
        samples.values[static_cast<size_t>(i)] - eval_transfer(model, samples.points[static_cast<size_t>(i)]);
    err += diff.squaredNorm();
  }
  return err;
}

VFResult vector_fit(const FrequencySampleSet& samples, Index r, std::vector<Complex> init,
                    Index max_iter, double pole_tol) {
  samples.validate();
  const Index n = samples.size();
  const Index l = samples.num_outputs();
  const Index m = samples.num_inputs();
  if (r < 1) throw std::invalid_argument("vector_fit: r must be >= 1");
  if (n < 2 * r)
    throw NotEnoughSamples("vector_fit: need at least 2r = " + std::to_string(2 * r) +
                           " samples, got " + std::to_string(n));
  if (static_cast<Index>(init.size()) != r)
    throw std::invalid_argument("vector_fit: init must supply exactly r poles");

  PoleSet poles = PoleSet::from_list(init);
  for (const Complex& a : poles.to_list())
    if (!(a.real() < 0.0))
      throw std::invalid_argument("vector_fit: initial poles must be strictly stable");

  const Index nch = l * m;
  std::vector<ChannelData> channels(static_cast<size_t>(nch));
  double data_scale = 0.0;
  for (Index o = 0; o < l; ++o)
    for (Index in = 0; in < m; ++in) {
      CVec h(n);
      for (Index i = 0; i < n; ++i) h(i) = samples.values[static_cast<size_t>(i)](o, in);
      data_scale += h.squaredNorm();
      channels[static_cast<size_t>(o * m + in)].h = std::move(h);
    }

  VFResult result;

  if (data_scale == 0.0) {
    // identically zero data: all residues vanish, nothing to iterate
    result.model = StateSpaceSystem::with_identity_e(Mat(0, 0), Mat(0, m), Mat(l, 0));
    result.poles = poles.to_list();
    result.converged = true;
    return result;
  }

  Mat last_r11, last_r12; // per-channel blocks of the last relocation pass
  Mat last_q1;
  Vec last_sc;
  Vec last_w;

  for (Index iter = 0; iter < max_iter; ++iter) {
    const CMat phi = basis_matrix(samples.points, poles);

    // column scalings: numerator blocks are channel-independent, denominator
    // blocks are scaled consistently across the stacked problem
    Vec sc(r), sw(r);
    for (Index j = 0; j < r; ++j) {
      sc(j) = phi.col(j).norm();
      if (sc(j) == 0.0) sc(j) = 1.0;
      double acc = 0.0;
      for (const auto& ch : channels) acc += (ch.h.array() * phi.col(j).array()).matrix().squaredNorm();
      sw(j) = std::sqrt(acc);
      if (sw(j) == 0.0) sw(j) = 1.0;
    }

    Mat stacked(nch * r, r);
    Vec stacked_rhs(nch * r);
    Mat r11(r, nch * r), r12(r, nch * r); // per-channel upper blocks, stored side by side
    Mat q1(r, nch);

    for (Index ch = 0; ch < nch; ++ch) {
      const CVec& h = channels[static_cast<size_t>(ch)].h;
      CMat lhs(n, 2 * r);
      for (Index j = 0; j < r; ++j) {
        lhs.col(j) = phi.col(j) / sc(j);
        lhs.col(r + j) = -(h.array() * phi.col(j).array()).matrix() / sw(j);
      }
      Mat a = real_split(lhs);
      Vec b = real_split(h);
      Eigen::HouseholderQR<Mat> qr(a);
      Mat rfact = qr.matrixQR().topRows(2 * r).triangularView<Eigen::Upper>();
      Vec qtb = (qr.householderQ().transpose() * b).head(2 * r);
      stacked.middleRows(ch * r, r) = rfact.block(r, r, r, r);
      stacked_rhs.segment(ch * r, r) = qtb.tail(r);
      r11.middleCols(ch * r, r) = rfact.topLeftCorner(r, r);
      r12.middleCols(ch * r, r) = rfact.block(0, r, r, r);
      q1.col(ch) = qtb.head(r);
    }

    // rank deficiency here is routine once r exceeds the degree the data
    // supports: the surplus denominator directions do not affect the fit and
    // the rank-revealing solve zeroes them out
    Eigen::ColPivHouseholderQR<Mat> wqr(stacked);
    const Vec w_scaled = wqr.solve(stacked_rhs);
    const Vec w = w_scaled.cwiseQuotient(sw);

    last_r11 = r11;
    last_r12 = r12;
    last_q1 = q1;
    last_sc = sc;
    last_w = w_scaled;

    const auto before = poles.to_list();
    poles = relocate_poles(poles, w);
    const auto after = poles.to_list();
    result.iterations = iter + 1;
    if (pole_movement(before, after) < pole_tol) {
      result.converged = true;
      break;
    }
  }

  // residue-only LS with the frozen poles
  const CMat phi = basis_matrix(samples.points, poles);
  Vec sc(r);
  for (Index j = 0; j < r; ++j) {
    sc(j) = phi.col(j).norm();
    if (sc(j) == 0.0) sc(j) = 1.0;
  }
  Mat a = real_split(phi) * sc.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  if (qr.rank() < r)
    throw DegenerateLS("vector_fit: rank-deficient residue system (rank " +
                       std::to_string(qr.rank()) + " of " + std::to_string(r) + ")");
  Mat coeffs(r, nch);
  for (Index ch = 0; ch < nch; ++ch) {
    const Vec x = qr.solve(real_split(channels[static_cast<size_t>(ch)].h));
    coeffs.col(ch) = x.cwiseQuotient(sc);
  }

  result.final_ls_error = barycentric_ls_error(samples.points, channels, phi, coeffs);

  // error of the last relocation pass' numerator fit on the same basis
  result.sigma_stage_ls_error = result.final_ls_error;
  if (last_r11.size() > 0) {
    Mat sigma_coeffs(r, nch);
    bool ok = true;
    for (Index ch = 0; ch < nch; ++ch) {
      const Vec rhs = last_q1.col(ch) - last_r12.middleCols(ch * r, r) * last_w;
      const Mat r11c = last_r11.middleCols(ch * r, r);
      const Vec x = r11c.triangularView<Eigen::Upper>().solve(rhs);
      if (!x.allFinite()) {
        ok = false;
        break;
      }
      sigma_coeffs.col(ch) = x.cwiseQuotient(last_sc);
    }
    if (ok) {
      const double err = barycentric_ls_error(samples.points, channels, phi, sigma_coeffs);
      if (std::isfinite(err)) result.sigma_stage_ls_error = err;
    }
  }

  // real block realization; each residue matrix is factored by its SVD and
  // numerically zero components are dropped
  const Index nreal = static_cast<Index>(poles.reals.size());
  const Index npair = static_cast<Index>(poles.pairs.size());
  std::vector<Mat> real_residues(static_cast<size_t>(nreal));
  std::vector<CMat> pair_residues(static_cast<size_t>(npair));
  for (Index j = 0; j < nreal; ++j) {
    Mat res(l, m);
    for (Index o = 0; o < l; ++o)
      for (Index in = 0; in < m; ++in) res(o, in) = coeffs(j, o * m + in);
    real_residues[static_cast<size_t>(j)] = std::move(res);
  }
  for (Index t = 0; t < npair; ++t) {
    CMat res(l, m);
    for (Index o = 0; o < l; ++o)
      for (Index in = 0; in < m; ++in)
        res(o, in) = Complex(coeffs(nreal + 2 * t, o * m + in), coeffs(nreal + 2 * t + 1, o * m + in));
    pair_residues[static_cast<size_t>(t)] = std::move(res);
  }

  std::vector<Eigen::JacobiSVD<Mat>> real_svds;
  std::vector<Eigen::JacobiSVD<CMat>> pair_svds;
  double top = 0.0;
  for (const Mat& res : real_residues) {
    real_svds.emplace_back(res, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (real_svds.back().singularValues().size() > 0)
      top = std::max(top, real_svds.back().singularValues()(0));
  }
  for (const CMat& res : pair_residues) {
    pair_svds.emplace_back(res, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (pair_svds.back().singularValues().size() > 0)
      top = std::max(top, pair_svds.back().singularValues()(0));
  }
  const double cut = 1e-14 * top;

  Index states = 0;
  for (const auto& svd : real_svds)
    for (Index t = 0; t < svd.singularValues().size(); ++t)
      if (svd.singularValues()(t) > cut) ++states;
  for (const auto& svd : pair_svds)
    for (Index t = 0; t < svd.singularValues().size(); ++t)
      if (svd.singularValues()(t) > cut) states += 2;

  Mat am = Mat::Zero(states, states);
  Mat bm = Mat::Zero(states, m);
  Mat cm = Mat::Zero(l, states);
  Index pos = 0;
  for (Index j = 0; j < nreal; ++j) {
    const auto& svd = real_svds[static_cast<size_t>(j)];
    for (Index t = 0; t < svd.singularValues().size(); ++t) {
      const double sv = svd.singularValues()(t);
      if (!(sv > cut)) continue;
      const double g = std::sqrt(sv);
      am(pos, pos) = poles.reals[static_cast<size_t>(j)];
      bm.row(pos) = g * svd.matrixV().col(t).transpose();
      cm.col(pos) = g * svd.matrixU().col(t);
      ++pos;
    }
  }
  for (Index t = 0; t < npair; ++t) {
    const auto& svd = pair_svds[static_cast<size_t>(t)];
    const Complex pole = poles.pairs[static_cast<size_t>(t)];
    for (Index q = 0; q < svd.singularValues().size(); ++q) {
      const double sv = svd.singularValues()(q);
      if (!(sv > cut)) continue;
      const double g = std::sqrt(sv);
      const CVec u = g * svd.matrixU().col(q);        // l
      const CVec v = g * svd.matrixV().col(q).conjugate(); // m, row as v^H
      am(pos, pos) = pole.real();
      am(pos, pos + 1) = pole.imag();
      am(pos + 1, pos) = -pole.imag();
      am(pos + 1, pos + 1) = pole.real();
      bm.row(pos) = v.real().transpose();
      bm.row(pos + 1) = -v.imag().transpose();
      cm.col(pos) = 2.0 * u.real();
      cm.col(pos + 1) = 2.0 * u.imag();
      pos += 2;
    }
  }

  result.model = StateSpaceSystem::with_identity_e(std::move(am), std::move(bm), std::move(cm));
  result.poles = poles.to_list();
  return result;
}

} // namespace lrpmor
