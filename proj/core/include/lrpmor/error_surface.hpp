#pragma once

#include <string>
#include <vector>

#include "lrpmor/parametric.hpp"
#include "lrpmor/reduced_model.hpp"

namespace lrpmor {

enum class ErrorSurfaceKind {
  /// max over the frequency grid of the spectral-norm deviation, normalized
  /// by the peak full response over the same grid
  FrequencyResponse,
  /// relative H2 distance ||H - Hr|| / ||Hr||
  H2,
};

struct ErrorSurfaceRow {
  Vec p;
  double error = 0.0;
};

/// Full-versus-reduced error over a parameter grid.
std::vector<ErrorSurfaceRow> error_surface(const LowRankParametricSystem& psys,
                                           const ParametricReducedModel& model,
                                           const std::vector<Vec>& param_grid,
                                           const std::vector<double>& freq_grid,
                                           ErrorSurfaceKind kind);

/// Plain CSV with a header row (p1,...,pk,error), scientific notation with
/// ten significant digits.
void write_error_surface_csv(const std::string& path, const std::vector<ErrorSurfaceRow>& rows);

} // namespace lrpmor
