#pragma once

#include <vector>

#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

/// Frequency-response data: values[i] is the l x m response at points[i].
struct FrequencySampleSet {
  std::vector<Complex> points;
  std::vector<CMat> values;

  Index size() const { return static_cast<Index>(points.size()); }
  Index num_outputs() const { return values.empty() ? 0 : values.front().rows(); }
  Index num_inputs() const { return values.empty() ? 0 : values.front().cols(); }
  void validate() const;
};

struct VFResult {
  StateSpaceSystem model; // real realization, identity E
  std::vector<Complex> poles; // closed under conjugation, strictly stable
  Index iterations = 0;
  double final_ls_error = 0.0;
  /// Error of the numerator fit carried by the last relocation pass,
  /// evaluated on the final pole basis; the residue-only refit below never
  /// exceeds it.
  double sigma_stage_ls_error = 0.0;
  bool converged = false;
};

/// Log-spaced startup poles: floor(r/2) conjugate pairs -(w/100) +- i w with
/// w log-spaced across [omega_min, omega_max] (geometric midpoint when only
/// one pair), plus one real pole -sqrt(omega_min*omega_max) when r is odd.
std::vector<Complex> initial_poles(double omega_min, double omega_max, Index r);

/// Rational least-squares fit with iterative pole relocation.
///
/// Each pass solves one linear LS problem per input/output channel for the
/// barycentric numerator residues together with a channel-shared denominator
/// weight vector (one QR of size 2N x 2r per channel), then relocates poles
/// to the zeros of the denominator, computed as the eigenvalues of a
/// diagonal-plus-rank-one matrix. Poles crossing into the right half-plane
/// are reflected. The iteration stops when the maximum relative pole movement
/// drops below pole_tol or after max_iter passes; a residue-only LS with the
/// frozen poles then produces the returned real state-space realization.
VFResult vector_fit(const FrequencySampleSet& samples, Index r, std::vector<Complex> init,
                    Index max_iter = 50, double pole_tol = 1e-6);

/// Discrete least-squares deviation: sum over samples of the squared
/// Frobenius distance between data and model response.
double ls_error(const FrequencySampleSet& samples, const StateSpaceSystem& model);

} // namespace lrpmor
