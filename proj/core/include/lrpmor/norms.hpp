#pragma once

#include <functional>
#include <vector>

#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

/// H2 norm sqrt(trace(C P C^T)) with P the controllability Gramian of the
/// (stable) realization. Throws UnstablePencil / SingularE from the Gramian
/// solve.
double h2_norm(const StateSpaceSystem& sys);

/// Frequency-response map omega -> H(i omega).
using FreqEvaluator = std::function<CMat(double omega)>;

struct LinfEstimate {
  double value = 0.0;
  double omega_at_max = 0.0;
};

/// Sampled estimate of sup over the imaginary axis of the largest singular
/// value: max over a logarithmic grid plus omega = 0, refined by a golden
/// section search around the grid argmax (three refinement rounds). The
/// estimate never exceeds the true supremum.
double linf_norm_estimate(const FreqEvaluator& evaluator, double omega_min, double omega_max,
                          Index grid_points);
LinfEstimate linf_norm_estimate_detailed(const FreqEvaluator& evaluator, double omega_min,
                                         double omega_max, Index grid_points);

/// Evaluator adapter for a state-space system.
FreqEvaluator transfer_evaluator(const StateSpaceSystem& sys);

/// Logarithmically spaced grid in [lo, hi] (inclusive endpoints).
std::vector<double> log_grid(double lo, double hi, Index count);

/// Heuristic frequency band enclosing the dynamics of a system: derived from
/// the moduli of the pencil eigenvalues, widened by a decade on both sides.
std::pair<double, double> active_band(const StateSpaceSystem& sys);

/// Largest singular value of a complex matrix.
double spectral_norm(const CMat& m);

} // namespace lrpmor
