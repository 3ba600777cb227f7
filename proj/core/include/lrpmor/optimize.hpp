#pragma once

#include <functional>
#include <vector>

#include "lrpmor/pipelines.hpp"

namespace lrpmor {

struct OptimConfig {
  Vec p0;
  Vec lower, upper;
  double nu = 5e-4;  // optimizer stopping tolerance
  double tau = 1e-2; // error-estimate tolerance
  double escalation_alg3 = 0.15;
  double escalation_alg4 = 0.10;
  Index max_outer = 25;
  Index max_evaluations = 0; // 0: defaults to 2000 * dimension

  void validate() const;
};

struct NelderMeadResult {
  Vec minimizer;
  double value = 0.0;
  Index evaluations = 0;
};

/// Bound-constrained Nelder-Mead simplex search (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5) on the smooth transform
/// p_i = lo_i + (hi_i - lo_i) sin^2(z_i). Terminates once both the simplex
/// diameter and the value spread drop below nu; throws MaxEvaluations when
/// the evaluation budget runs out first. Nonfinite objective values are
/// treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& p0,
                             const Vec& lower, const Vec& upper, double nu,
                             Index max_evaluations = 0);

/// Full-order objective ||H(., p)||_H2: assembles A(p) and solves one
/// full-size Lyapunov equation per call.
double h2_objective_full(const LowRankParametricSystem& psys, const Vec& p);

/// Surrogate objective: H2 norm of the assembled reduced realization at p.
/// Throws SurrogateUnstable when that realization is unstable.
double h2_objective_reduced(const ParametricReducedModel& model, const Vec& p);

struct OptimReport {
  Vec p_star;
  double objective_value = 0.0;
  Index outer_iterations = 0;
  Index objective_evaluations = 0;
  std::vector<std::vector<Index>> order_history;
  double error_estimate_at_optimum = 0.0;
  // vector-fitting call statistics (surrogate loop B only)
  Index vf_calls = 0;
  Index vf_warm_calls = 0;
  Index vf_warm_fast = 0; // warm-started calls converging within two passes
};

/// Surrogate loop on the subsystem-reduction pipeline: sizes the initial
/// reduction so that the bound f(p0) < tau, minimizes the reduced H2 norm,
/// and re-optimizes with escalated orders (plus escalation_alg3 per step,
/// at least one state, capped at the full subsystem order) until
/// f at the minimizer drops below tau. Gramian factors are computed once and
/// reused across escalations.
OptimReport surrogate_optimize_alg3(const LowRankParametricSystem& psys, const OptimConfig& cfg,
                                    const Alg1Config& alg1cfg);

/// Surrogate loop on the sampling + vector-fitting pipeline: samples the
/// subsystems once, then minimizes the H2 norm of the per-parameter VF fit.
/// The discrete LS error e(p) of the fit is the free error estimate; when
/// e at the minimizer exceeds tau the degree grows by escalation_alg4 and the
/// previously converged poles (appended with fresh startup poles) warm-start
/// the next pass.
OptimReport surrogate_optimize_alg4(const LowRankParametricSystem& psys, const OptimConfig& cfg,
                                    const SamplingSpec& sampling, Index r0, Index vf_max_iter = 50,
                                    double vf_pole_tol = 1e-6);

/// Default initial degree for the sampling pipeline: max(k+2, ceil(n/15)),
/// capped at 200.
Index default_vf_order(const LowRankParametricSystem& psys);

/// Reference optimization of the full-order objective with the same
/// optimizer settings; used for accuracy and speedup comparisons.
OptimReport optimize_full_h2(const LowRankParametricSystem& psys, const OptimConfig& cfg);

} // namespace lrpmor
