#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lrpmor/balanced_truncation.hpp"
#include "lrpmor/parametric.hpp"
#include "lrpmor/reduced_model.hpp"
#include "lrpmor/vector_fitting.hpp"

namespace lrpmor {

/// Frequency window and grid density used by the sampled-norm estimates of
/// the reduction error bound.
struct FrequencyWindow {
  double omega_min = 1e-2;
  double omega_max = 1e4;
  Index grid_points = 400;
};

struct Alg1Config {
  std::array<BTTarget, 4> targets;
  FrequencyWindow bound_window;
};

/// Per-subsystem balanced-truncation error bounds eps_i = 2 * tail HSV sum.
struct ErrorBoundData {
  std::array<double, 4> eps{};
};

/// Shared-pencil reducer for the four subsystems. One Schur decomposition of
/// the pencil (E, A0) backs all eight Gramian solves; re-truncating at larger
/// orders reuses the stored factors, only the number of retained SVD columns
/// changes.
class SubsystemReducer {
public:
  explicit SubsystemReducer(const LowRankParametricSystem& psys);

  std::pair<ParametricReducedModel, ErrorBoundData>
  reduce(const std::array<BTTarget, 4>& targets) const;

  const BTFactors& factors(int subsystem) const; // 0..3
  std::array<Index, 4> max_orders() const;
  Index full_order() const { return n_; }

private:
  Index n_ = 0;
  ParamMode mode_;
  std::vector<Index> slot_of_param_;
  Index num_params_ = 0;
  std::array<std::unique_ptr<BTFactors>, 4> factors_;
};

std::pair<ParametricReducedModel, ErrorBoundData>
reduce_subsystems(const LowRankParametricSystem& psys, const Alg1Config& cfg);

/// Approximate reduction error bound
///   f(p) = eps1 + eps2 f1 + eps3 f1 f2 + eps4 f2
/// with f1 and f2 sampled-sup norms of the coupled combinations of the
/// reduced subsystems over the window.
double error_bound_f(const Vec& p, const ParametricReducedModel& model, const ErrorBoundData& eps,
                     const FrequencyWindow& window);

/// Validation-only variant evaluating f2 on the full-order subsystems.
double error_bound_f_exact(const LowRankParametricSystem& psys, const Vec& p,
                           const ParametricReducedModel& model, const ErrorBoundData& eps,
                           const FrequencyWindow& window);

/// Parameter-independent subsystem samples at fixed points: one factorization
/// of (xi E - A0) per point, solved against [B U], yields all four values.
struct OfflineSamples {
  std::vector<Complex> points;
  std::vector<CMat> h1, h2, h3, h4;
  ParamMode mode = ParamMode::General;
  std::vector<Index> slot_of_param;
  Index num_params = 0;

  Index size() const { return static_cast<Index>(points.size()); }
  Vec expand_params(const Vec& p) const;
};

OfflineSamples sample_subsystems(const LowRankParametricSystem& psys,
                                 const std::vector<Complex>& points);

/// Parametric resampling of the stored subsystem values; touches only
/// k/m/l-sized data, never the full order.
FrequencySampleSet resample_parametric(const OfflineSamples& off, const Vec& p);

/// Resample followed by a vector-fitting fit of degree r.
VFResult vf_reduce_at_parameter(const OfflineSamples& off, const Vec& p, Index r,
                                const std::vector<Complex>& init_poles, Index max_iter = 50,
                                double pole_tol = 1e-6);

struct SamplingSpec {
  Index count = 500;
  double omega_min = 1e-2;
  double omega_max = 1e4;
};

/// Points i*omega with omega log-spaced across the spec window.
std::vector<Complex> log_imag_points(const SamplingSpec& spec);

/// Generic window: [1e-2, 10 * spectral radius of the pencil].
SamplingSpec default_sampling_spec(const LowRankParametricSystem& psys, Index count = 500);

} // namespace lrpmor
