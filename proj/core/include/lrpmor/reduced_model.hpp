#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lrpmor/parametric.hpp"
#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

/// The four reduced subsystems plus the assembly rules for the parametric
/// reduced transfer function. Each subsystem carries identity E. h3 is square
/// (k inputs, k outputs); all four are asymptotically stable, which the
/// factory checks.
struct ParametricReducedModel {
  StateSpaceSystem h1, h2, h3, h4;
  std::array<Index, 4> orders{};
  ParamMode mode = ParamMode::General;
  std::vector<Index> slot_of_param;
  Index num_params = 0;

  Index k_internal() const { return h3.num_inputs(); }
  Vec expand_params(const Vec& p) const;
};

/// Validating factory: checks input/output compatibility, square h3,
/// identity E, and asymptotic stability of every subsystem.
ParametricReducedModel make_parametric_reduced_model(StateSpaceSystem h1, StateSpaceSystem h2,
                                                     StateSpaceSystem h3, StateSpaceSystem h4,
                                                     ParamMode mode,
                                                     std::vector<Index> slot_of_param,
                                                     Index num_params);

/// Evaluates the reduced parametric transfer function at (s, p) from the four
/// subsystem values.
CMat eval_reduced(const ParametricReducedModel& model, Complex s, const Vec& p);

/// State-space realization of the reduced parametric model at parameter p,
/// of order r1+r2+r3+r4 with identity E. Its transfer function equals the
/// coupled combination of the four reduced subsystems at every s, and its
/// spectrum is the union of the spectra of A1, A2, A4 and the closed-loop
/// block A3 - B3 W C3 with W = diag of the expanded parameters.
StateSpaceSystem assemble_realization(const ParametricReducedModel& model, const Vec& p);

struct StabilityReport {
  bool stable = false;
  double worst_real_part = 0.0;
  std::optional<Vec> offending_p;
};

/// Checks the assembled spectrum over a list of parameter samples; stable iff
/// every eigenvalue real part stays below -margin.
StabilityReport check_uniform_stability(const ParametricReducedModel& model,
                                        const std::vector<Vec>& param_samples,
                                        double margin = 1e-10);

struct PositiveRealReport {
  bool passed = false;
  double min_herm_eig = 0.0;
};

/// Samples the Hermitian part of H(i omega) over the grid; a necessary
/// condition test for positive realness, not a proof.
PositiveRealReport check_positive_real_sampled(const StateSpaceSystem& sys,
                                               const std::vector<double>& freq_grid);

struct HinfBoundReport {
  bool passed = false;
  double norm_estimate = 0.0;
  double threshold = 0.0;
};

/// Tests the small-gain condition ||H||_Hinf < 1/p_max on a sampled estimate.
HinfBoundReport check_hinf_bound(const StateSpaceSystem& sys, double p_max,
                                 Index grid_points = 400);

} // namespace lrpmor
