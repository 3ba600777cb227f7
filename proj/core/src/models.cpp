#include "lrpmor/models.hpp"

#include <cmath>
#include <string>

#include "lrpmor/errors.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

LowRankParametricSystem generate_penzl(Index tail) {
  if (tail < 1) throw std::invalid_argument("generate_penzl: tail must be >= 1");
  const Index n = tail + 6;

  LowRankParametricSystem psys;
  psys.E = Mat::Identity(n, n);
  psys.A0 = Mat::Zero(n, n);
  psys.A0.topLeftCorner(6, 6) = -Mat::Identity(6, 6);
  for (Index i = 0; i < tail; ++i) psys.A0(6 + i, 6 + i) = -static_cast<double>(i + 1);

  psys.U = Mat::Zero(n, 6);
  psys.V = Mat::Zero(n, 6);
  for (Index i = 0; i < 6; ++i) psys.V(i, i) = 1.0;
  for (Index i : {Index(0), Index(2), Index(4)}) psys.U(i + 1, i) = -1.0;
  for (Index i : {Index(1), Index(3), Index(5)}) psys.U(i - 1, i) = 1.0;

  Mat c = Mat::Ones(1, n);
  c.leftCols(6).setConstant(10.0);
  psys.C = c;
  psys.B = c.transpose();

  psys.mode = ParamMode::General;
  psys.slot_of_param = {0, 0, 1, 1, 2, 2};
  psys.num_params = 3;
  psys.validate();
  return psys;
}

namespace {

Index scaled_index(Index reference, Index d) {
  const double ratio = static_cast<double>(d) / 900.0;
  return static_cast<Index>(std::lround(static_cast<double>(reference) * ratio));
}

Index scaled_offset(Index reference, Index d) {
  const double ratio = static_cast<double>(d) / 900.0;
  return std::max<Index>(1, static_cast<Index>(std::ceil(static_cast<double>(reference) * ratio)));
}

// Mass profile of the reference configuration evaluated at the scaled
// index x = i / (d/900), piecewise linear in three segments.
Vec default_masses(Index d) {
  const Index n = 2 * d + 1;
  const double ratio = static_cast<double>(d) / 900.0;
  Vec masses(n);
  for (Index i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / ratio;
    double value;
    if (i <= (d + 1) / 2)
      value = 1000.0 - x / 2.0;
    else if (i <= d)
      value = x + 325.0;
    else
      value = 1300.0 - x / 4.0;
    masses[i - 1] = value;
  }
  return masses;
}

} // namespace

void OscillatorConfig::validate() const {
  if (d < 2) throw std::invalid_argument("OscillatorConfig: d must be >= 2");
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(k3 > 0.0))
    throw std::invalid_argument("OscillatorConfig: stiffness values must be positive");
  if (alpha_c < 0.0) throw std::invalid_argument("OscillatorConfig: alpha_c must be >= 0");
  if (masses && masses->size() != 2 * d + 1)
    throw std::invalid_argument("OscillatorConfig: mass profile must have 2d+1 entries");
}

OscillatorModel generate_oscillator(const OscillatorConfig& cfg) {
  cfg.validate();
  const Index d = cfg.d;
  const Index n = 2 * d + 1;

  OscillatorModel model;
  Vec masses = cfg.masses ? *cfg.masses : default_masses(d);
  if (masses.minCoeff() <= 0.0) throw NotSPD("generate_oscillator: mass profile not positive");
  model.M = masses.asDiagonal();

  Mat k = Mat::Zero(n, n);
  auto fill_row_block = [&](Index off, Index len, double stiffness) {
    for (Index i = 0; i < len; ++i) {
      k(off + i, off + i) = 2.0 * stiffness;
      if (i + 1 < len) {
        k(off + i, off + i + 1) = -stiffness;
        k(off + i + 1, off + i) = -stiffness;
      }
    }
  };
  fill_row_block(0, d, cfg.k1);
  fill_row_block(d, d, cfg.k2);
  k(d - 1, n - 1) = -cfg.k1;
  k(n - 1, d - 1) = -cfg.k1;
  k(2 * d - 1, n - 1) = -cfg.k2;
  k(n - 1, 2 * d - 1) = -cfg.k2;
  k(n - 1, n - 1) = cfg.k1 + cfg.k2 + cfg.k3;
  model.K = k;

  // D_crit = 2 M^{1/2} sqrt(M^{-1/2} K M^{-1/2}) M^{1/2}; M is diagonal
  const Vec msqrt = masses.cwiseSqrt();
  const Vec minv_sqrt = msqrt.cwiseInverse();
  const Mat k_tilde = minv_sqrt.asDiagonal() * k * minv_sqrt.asDiagonal();
  const Mat d_crit =
      2.0 * Mat(msqrt.asDiagonal()) * sqrt_spd(0.5 * (k_tilde + k_tilde.transpose())) *
      Mat(msqrt.asDiagonal());
  model.D_int = cfg.alpha_c * d_crit;

  Mat b2 = Mat::Zero(n, 5);
  b2(0, 0) = 20.0;
  b2(1, 1) = 10.0;
  b2(d, 2) = 20.0;
  b2(d + 1, 3) = 10.0;
  b2(n - 1, 4) = 30.0;
  model.B2 = b2;

  const Index out1 = std::clamp<Index>(scaled_index(400, d), 1, d);
  const Index out2 = std::clamp<Index>(scaled_index(1300, d), d + 1, 2 * d);
  Mat c2 = Mat::Zero(2, n);
  c2(0, out1 - 1) = 1.0;
  c2(1, out2 - 1) = 1.0;
  model.C2 = c2;

  const Index j1 = cfg.j1 > 0 ? cfg.j1 : std::max<Index>(1, scaled_index(100, d));
  const Index j2 = cfg.j2 > 0 ? cfg.j2 : std::max<Index>(1, scaled_index(150, d));
  const Index j3 = cfg.j3 > 0 ? cfg.j3 : std::clamp<Index>(scaled_index(1400, d), d + 1, 2 * d);
  const Index off10 = scaled_offset(10, d);
  const Index off100 = scaled_offset(100, d);
  if (j1 + off10 > n || j3 + off100 > n || j2 > n)
    throw std::invalid_argument("generate_oscillator: damper index with offset out of range");
  Mat u2 = Mat::Zero(n, 4);
  u2(j1 - 1, 0) = 1.0;
  u2(j1 + off10 - 1, 0) = -1.0;
  u2(j2 - 1, 1) = 1.0;
  u2(j3 - 1, 2) = 1.0;
  u2(j3 - 1, 3) = 1.0;
  u2(j3 + off100 - 1, 3) = -1.0;
  model.U2 = u2;

  // first-order realization
  const Index ns = 2 * n;
  LowRankParametricSystem psys;
  psys.E = Mat::Identity(ns, ns);
  psys.E.bottomRightCorner(n, n) = model.M;
  psys.A0 = Mat::Zero(ns, ns);
  psys.A0.topRightCorner(n, n) = Mat::Identity(n, n);
  psys.A0.bottomLeftCorner(n, n) = -model.K;
  psys.A0.bottomRightCorner(n, n) = -model.D_int;
  psys.U = Mat::Zero(ns, 4);
  psys.U.bottomRows(n) = model.U2;
  psys.V = psys.U;
  psys.B = Mat::Zero(ns, 5);
  psys.B.bottomRows(n) = model.B2;
  psys.C = Mat::Zero(2, ns);
  psys.C.leftCols(n) = model.C2;
  psys.mode = ParamMode::NonnegativeSqrt;
  psys.use_identity_slots();
  psys.validate();
  model.system = std::move(psys);

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(k, model.M, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw Error("generate_oscillator: eigensolve failed");
  const Vec lam = ges.eigenvalues();
  if (lam.minCoeff() <= 0.0) throw NotSPD("generate_oscillator: stiffness matrix not positive definite");
  model.omega_min = std::sqrt(lam.minCoeff());
  model.omega_max = std::sqrt(lam.maxCoeff());
  return model;
}

LowRankParametricSystem build_thermal(const ThermalMatrices& mats, double p_t) {
  const Index n = mats.A.rows();
  if (mats.A.cols() != n || mats.E.rows() != n || mats.E.cols() != n || mats.A_t.rows() != n ||
      mats.A_b.rows() != n || mats.A_s.rows() != n || mats.B.rows() != n || mats.C.cols() != n)
    throw std::invalid_argument("build_thermal: inconsistent matrix dimensions");

  auto require_diagonal = [&](const Mat& m, const char* name) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (i != j && std::abs(m(i, j)) > 1e-14)
          throw NotDiagonal(std::string("build_thermal: ") + name +
                            " has an off-diagonal entry at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
  };
  require_diagonal(mats.A_b, "A_b");
  require_diagonal(mats.A_s, "A_s");

  std::vector<std::pair<Index, double>> entries; // (row, diagonal value)
  std::vector<Index> slots;
  for (Index i = 0; i < n; ++i)
    if (mats.A_b(i, i) != 0.0) {
      entries.emplace_back(i, mats.A_b(i, i));
      slots.push_back(0);
    }
  for (Index i = 0; i < n; ++i)
    if (mats.A_s(i, i) != 0.0) {
      entries.emplace_back(i, mats.A_s(i, i));
      slots.push_back(1);
    }

  const Index k = static_cast<Index>(entries.size());
  LowRankParametricSystem psys;
  psys.E = mats.E;
  psys.A0 = mats.A - p_t * mats.A_t;
  psys.U = Mat::Zero(n, k);
  psys.V = Mat::Zero(n, k);
  for (Index col = 0; col < k; ++col) {
    const auto& [row, value] = entries[static_cast<size_t>(col)];
    const double root = std::sqrt(std::abs(value));
    psys.U(row, col) = root;
    psys.V(row, col) = value < 0.0 ? -root : root;
  }
  psys.B = mats.B;
  psys.C = mats.C;
  psys.mode = ParamMode::General;
  psys.slot_of_param = std::move(slots);
  psys.num_params = 2;
  psys.validate();
  return psys;
}

} // namespace lrpmor
