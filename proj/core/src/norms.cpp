#include "lrpmor/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrpmor/errors.hpp"
#include "lrpmor/lyapunov.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

double h2_norm(const StateSpaceSystem& sys) {
  if (sys.order() == 0) return 0.0;
  LyapunovSolver solver(sys.A, sys.E);
  Mat p = solver.solve(sys.B * sys.B.transpose());
  const double trace = (sys.C * p * sys.C.transpose()).trace();
  return std::sqrt(std::max(0.0, trace));
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

std::vector<double> log_grid(double lo, double hi, Index count) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  if (count < 2) throw std::invalid_argument("log_grid: need at least two points");
  std::vector<double> grid(static_cast<size_t>(count));
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (Index i = 0; i < count; ++i)
    grid[static_cast<size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

FreqEvaluator transfer_evaluator(const StateSpaceSystem& sys) {
  return [sys](double omega) { return eval_transfer(sys, Complex(0.0, omega)); };
}

std::pair<double, double> active_band(const StateSpaceSystem& sys) {
  const CVec eigs = eigenvalues(sys.A, sys.E);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    const double mag = std::abs(eigs[i]);
    if (mag > 0.0) lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  if (!(hi > 0.0)) return {1e-2, 1e2};
  lo = std::max(1e-8, 0.1 * std::min(lo, hi));
  return {lo, 10.0 * hi};
}

namespace {

double safe_eval(const FreqEvaluator& evaluator, double omega) {
  try {
    return spectral_norm(evaluator(omega));
  } catch (const std::exception& ex) {
    std::ostringstream msg;
    msg << "linf_norm_estimate: evaluation failed at omega = " << omega << ": " << ex.what();
    throw EvaluationFailure(msg.str());
  }
}

} // namespace

LinfEstimate linf_norm_estimate_detailed(const FreqEvaluator& evaluator, double omega_min,
                                         double omega_max, Index grid_points) {
  if (grid_points < 2) throw std::invalid_argument("linf_norm_estimate: grid_points must be >= 2");
  if (!(omega_min > 0.0) || !(omega_min < omega_max))
    throw std::invalid_argument("linf_norm_estimate: need 0 < omega_min < omega_max");

  const auto grid = log_grid(omega_min, omega_max, grid_points);
  LinfEstimate best{safe_eval(evaluator, 0.0), 0.0};
  Index argmax = -1;
  for (Index i = 0; i < grid_points; ++i) {
    const double value = safe_eval(evaluator, grid[static_cast<size_t>(i)]);
    if (value > best.value) {
      best = {value, grid[static_cast<size_t>(i)]};
      argmax = i;
    }
  }

  if (argmax >= 0) {
    // golden-section refinement between the grid neighbours of the argmax,
    // in log coordinates
    const Index ilo = std::max<Index>(0, argmax - 1);
    const Index ihi = std::min<Index>(grid_points - 1, argmax + 1);
    double a = std::log10(grid[static_cast<size_t>(ilo)]);
    double b = std::log10(grid[static_cast<size_t>(ihi)]);
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = safe_eval(evaluator, std::pow(10.0, c));
    double fd = safe_eval(evaluator, std::pow(10.0, d));
    auto track = [&best](double value, double omega) {
      if (value > best.value) best = {value, omega};
    };
    track(fc, std::pow(10.0, c));
    track(fd, std::pow(10.0, d));
    for (int round = 0; round < 3; ++round) {
      if (fc < fd) {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = safe_eval(evaluator, std::pow(10.0, d));
        track(fd, std::pow(10.0, d));
      } else {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = safe_eval(evaluator, std::pow(10.0, c));
        track(fc, std::pow(10.0, c));
      }
    }
  }
  return best;
}

double linf_norm_estimate(const FreqEvaluator& evaluator, double omega_min, double omega_max,
                          Index grid_points) {
  return linf_norm_estimate_detailed(evaluator, omega_min, omega_max, grid_points).value;
}

} // namespace lrpmor
