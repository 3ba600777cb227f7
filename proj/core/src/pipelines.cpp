#include "lrpmor/pipelines.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#ifdef LRPMOR_HAVE_PARALLEL_STL
#include <execution>
#endif

#include "lrpmor/errors.hpp"
#include "lrpmor/norms.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

SubsystemReducer::SubsystemReducer(const LowRankParametricSystem& psys) {
  psys.validate();
  n_ = psys.order();
  mode_ = psys.mode;
  slot_of_param_ = psys.slot_of_param;
  num_params_ = psys.num_params;

  LyapunovSolver solver(psys.A0, psys.E);
  const Mat vt = psys.V.transpose();
  const std::array<std::pair<const Mat*, const Mat*>, 4> io = {
      std::pair<const Mat*, const Mat*>{&psys.B, &psys.C},
      {&psys.U, &psys.C},
      {&psys.U, &vt},
      {&psys.B, &vt}};
  std::array<int, 4> idx = {0, 1, 2, 3};
  auto build = [&](int i) {
    factors_[static_cast<size_t>(i)] =
        std::make_unique<BTFactors>(psys.A0, psys.E, *io[static_cast<size_t>(i)].first,
                                    *io[static_cast<size_t>(i)].second, solver);
  };
#ifdef LRPMOR_HAVE_PARALLEL_STL
  std::for_each(std::execution::par, idx.begin(), idx.end(), build);
#else
  std::for_each(idx.begin(), idx.end(), build);
#endif
}

const BTFactors& SubsystemReducer::factors(int subsystem) const {
  return *factors_.at(static_cast<size_t>(subsystem));
}

std::array<Index, 4> SubsystemReducer::max_orders() const {
  return {factors_[0]->max_order(), factors_[1]->max_order(), factors_[2]->max_order(),
          factors_[3]->max_order()};
}

std::pair<ParametricReducedModel, ErrorBoundData>
SubsystemReducer::reduce(const std::array<BTTarget, 4>& targets) const {
  std::array<BTResult, 4> results;
  for (int i = 0; i < 4; ++i) {
    try {
      results[static_cast<size_t>(i)] = factors_[static_cast<size_t>(i)]->truncate(
          targets[static_cast<size_t>(i)]);
    } catch (const Error& err) {
      throw Error("reduce_subsystems: subsystem " + std::to_string(i + 1) + ": " + err.what());
    }
  }
  ErrorBoundData eps;
  for (int i = 0; i < 4; ++i) eps.eps[static_cast<size_t>(i)] = results[static_cast<size_t>(i)].error_bound;
  ParametricReducedModel model = make_parametric_reduced_model(
      std::move(results[0].reduced), std::move(results[1].reduced), std::move(results[2].reduced),
      std::move(results[3].reduced), mode_, slot_of_param_, num_params_);
  return {std::move(model), eps};
}

std::pair<ParametricReducedModel, ErrorBoundData>
reduce_subsystems(const LowRankParametricSystem& psys, const Alg1Config& cfg) {
  return SubsystemReducer(psys).reduce(cfg.targets);
}

namespace {

// f1(p, G1, G2) = || D (I + D G1 D)^{-1} D G2 ||, with the asymmetric variant
// D~ (I + G1 D~)^{-1} G2 in general parameter mode; the two coincide for
// nonnegative parameters.
CMat f1_value(const CMat& g1, const CMat& g2, const Vec& slots, ParamMode mode) {
  const Index k = g1.rows();
  if (mode == ParamMode::NonnegativeSqrt) {
    const CVec d = slots.cwiseSqrt().cast<Complex>();
    CMat middle = CMat::Identity(k, k) + d.asDiagonal() * g1 * d.asDiagonal();
    Eigen::FullPivLU<CMat> lu(middle);
    if (!lu.isInvertible()) throw CouplingSingular("error_bound_f: coupling matrix singular");
    return CMat(d.asDiagonal()) * lu.solve(CMat(d.asDiagonal() * g2));
  }
  const CVec d = slots.cast<Complex>();
  CMat middle = CMat::Identity(k, k) + g1 * d.asDiagonal();
  Eigen::FullPivLU<CMat> lu(middle);
  if (!lu.isInvertible()) throw CouplingSingular("error_bound_f: coupling matrix singular");
  return CMat(d.asDiagonal()) * lu.solve(g2);
}

// f2(p, G1, G2) = || G1 D (I + D G2 D)^{-1} D ||, general variant
// G1 D~ (I + G2 D~)^{-1}.
CMat f2_value(const CMat& g1, const CMat& g2, const Vec& slots, ParamMode mode) {
  const Index k = g2.rows();
  if (mode == ParamMode::NonnegativeSqrt) {
    const CVec d = slots.cwiseSqrt().cast<Complex>();
    CMat middle = CMat::Identity(k, k) + d.asDiagonal() * g2 * d.asDiagonal();
    Eigen::FullPivLU<CMat> lu(middle);
    if (!lu.isInvertible()) throw CouplingSingular("error_bound_f: coupling matrix singular");
    return g1 * CMat(d.asDiagonal()) * lu.solve(CMat(CVec(d).asDiagonal()));
  }
  const CVec d = slots.cast<Complex>();
  CMat middle = CMat::Identity(k, k) + g2 * d.asDiagonal();
  Eigen::FullPivLU<CMat> lu(middle);
  if (!lu.isInvertible()) throw CouplingSingular("error_bound_f: coupling matrix singular");
  CMat ident = CMat::Identity(k, k);
  return g1 * CMat(d.asDiagonal()) * lu.solve(ident);
}

// Four-term bound with f1 built from (f1_g1, f1_g2) and f2 from
// (f2_g1, f2_g2); the exact validation variant passes full-order systems
// into f2.
double bound_terms(const StateSpaceSystem& f1_g1, const StateSpaceSystem& f1_g2,
                   const StateSpaceSystem& f2_g1, const StateSpaceSystem& f2_g2, const Vec& slots,
                   ParamMode mode, const ErrorBoundData& eps, const FrequencyWindow& window) {
  const bool need_f1 = eps.eps[1] != 0.0 || eps.eps[2] != 0.0;
  const bool need_f2 = eps.eps[2] != 0.0 || eps.eps[3] != 0.0;
  const bool zero_slots = slots.size() == 0 || slots.cwiseAbs().maxCoeff() == 0.0;

  double f1 = 0.0, f2 = 0.0;
  if (!zero_slots && need_f1) {
    f1 = linf_norm_estimate(
        [&](double omega) {
          const Complex s(0.0, omega);
          return f1_value(eval_transfer(f1_g1, s), eval_transfer(f1_g2, s), slots, mode);
        },
        window.omega_min, window.omega_max, window.grid_points);
  }
  if (!zero_slots && need_f2) {
    f2 = linf_norm_estimate(
        [&](double omega) {
          const Complex s(0.0, omega);
          return f2_value(eval_transfer(f2_g1, s), eval_transfer(f2_g2, s), slots, mode);
        },
        window.omega_min, window.omega_max, window.grid_points);
  }
  return eps.eps[0] + eps.eps[1] * f1 + eps.eps[2] * f1 * f2 + eps.eps[3] * f2;
}

} // namespace

double error_bound_f(const Vec& p, const ParametricReducedModel& model, const ErrorBoundData& eps,
                     const FrequencyWindow& window) {
  const Vec slots = model.expand_params(p);
  return bound_terms(model.h3, model.h4, model.h2, model.h3, slots, model.mode, eps, window);
}

double error_bound_f_exact(const LowRankParametricSystem& psys, const Vec& p,
                           const ParametricReducedModel& model, const ErrorBoundData& eps,
                           const FrequencyWindow& window) {
  const Vec slots = model.expand_params(p);
  const SubsystemQuartet full = subsystems(psys);
  return bound_terms(model.h3, model.h4, full.h2, full.h3, slots, model.mode, eps, window);
}

Vec OfflineSamples::expand_params(const Vec& p) const {
  if (p.size() != num_params)
    throw std::invalid_argument("OfflineSamples: wrong parameter count");
  if (mode == ParamMode::NonnegativeSqrt && p.size() > 0 && p.minCoeff() < 0.0)
    throw NegativeParameter("OfflineSamples: negative parameter in square-root mode");
  Vec slots(static_cast<Index>(slot_of_param.size()));
  for (Index i = 0; i < slots.size(); ++i) slots[i] = p[slot_of_param[static_cast<size_t>(i)]];
  return slots;
}

OfflineSamples sample_subsystems(const LowRankParametricSystem& psys,
                                 const std::vector<Complex>& points) {
  psys.validate();
  const Index n = psys.order();
  const Index m = psys.num_inputs();
  const Index k = psys.k_internal();

  OfflineSamples off;
  off.points = points;
  off.mode = psys.mode;
  off.slot_of_param = psys.slot_of_param;
  off.num_params = psys.num_params;
  off.h1.resize(points.size());
  off.h2.resize(points.size());
  off.h3.resize(points.size());
  off.h4.resize(points.size());

  CMat rhs(n, m + k);
  rhs.leftCols(m) = psys.B.cast<Complex>();
  rhs.rightCols(k) = psys.U.cast<Complex>();
  const CMat c = psys.C.cast<Complex>();
  const CMat vt = psys.V.transpose().cast<Complex>();

  std::vector<size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto work = [&](size_t i) {
    try {
      const Complex xi = points[i];
      CMat shifted = xi * psys.E.cast<Complex>() - psys.A0.cast<Complex>();
      Eigen::PartialPivLU<CMat> lu(shifted);
      const auto diag = lu.matrixLU().diagonal().cwiseAbs();
      if (diag.minCoeff() <=
          static_cast<double>(n) * std::numeric_limits<double>::epsilon() * diag.maxCoeff()) {
        std::ostringstream msg;
        msg << "sample_subsystems: xi = (" << xi.real() << ", " << xi.imag()
            << ") is an eigenvalue of the pencil";
        throw ResolventSingular(msg.str());
      }
      CMat x = lu.solve(rhs);
      off.h1[i] = c * x.leftCols(m);
      off.h2[i] = c * x.rightCols(k);
      off.h3[i] = vt * x.rightCols(k);
      off.h4[i] = vt * x.leftCols(m);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
#ifdef LRPMOR_HAVE_PARALLEL_STL
  std::for_each(std::execution::par, idx.begin(), idx.end(), work);
#else
  std::for_each(idx.begin(), idx.end(), work);
#endif
  if (failure) std::rethrow_exception(failure);
  return off;
}

FrequencySampleSet resample_parametric(const OfflineSamples& off, const Vec& p) {
  const Vec slots = off.expand_params(p);
  FrequencySampleSet out;
  out.points = off.points;
  out.values.resize(off.points.size());
  for (size_t i = 0; i < off.points.size(); ++i)
    out.values[i] = eval_parametric_smw(off.h1[i], off.h2[i], off.h3[i], off.h4[i], slots, off.mode);
  return out;
}

VFResult vf_reduce_at_parameter(const OfflineSamples& off, const Vec& p, Index r,
                                const std::vector<Complex>& init_poles, Index max_iter,
                                double pole_tol) {
  return vector_fit(resample_parametric(off, p), r, init_poles, max_iter, pole_tol);
}

std::vector<Complex> log_imag_points(const SamplingSpec& spec) {
  const auto grid = log_grid(spec.omega_min, spec.omega_max, spec.count);
  std::vector<Complex> points(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) points[i] = Complex(0.0, grid[i]);
  return points;
}

SamplingSpec default_sampling_spec(const LowRankParametricSystem& psys, Index count) {
  SamplingSpec spec;
  spec.count = count;
  const CVec eigs = eigenvalues(psys.A0, psys.E);
  double rho = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) rho = std::max(rho, std::abs(eigs[i]));
  spec.omega_min = 1e-2;
  spec.omega_max = std::max(10.0 * rho, 1.0);
  return spec;
}

} // namespace lrpmor
