#include "lrpmor/error_surface.hpp"

#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>

#ifdef LRPMOR_HAVE_PARALLEL_STL
#include <execution>
#endif

#include "lrpmor/errors.hpp"
#include "lrpmor/norms.hpp"

namespace lrpmor {

namespace {

double frequency_surface_error(const LowRankParametricSystem& psys,
                               const ParametricReducedModel& model, const Vec& p,
                               const std::vector<double>& freq_grid) {
  const StateSpaceSystem full(psys.E, psys.state_matrix(p), psys.B, psys.C, false);
  const StateSpaceSystem reduced = assemble_realization(model, p);
  double worst_diff = 0.0;
  double peak = 0.0;
  for (double omega : freq_grid) {
    const Complex s(0.0, omega);
    const CMat hv = eval_transfer(full, s);
    const CMat rv = eval_transfer(reduced, s);
    worst_diff = std::max(worst_diff, spectral_norm(hv - rv));
    peak = std::max(peak, spectral_norm(hv));
  }
  return peak > 0.0 ? worst_diff / peak : worst_diff;
}

double h2_surface_error(const LowRankParametricSystem& psys, const ParametricReducedModel& model,
                        const Vec& p) {
  const StateSpaceSystem reduced = assemble_realization(model, p);
  const Mat a_full = psys.state_matrix(p);
  const Index n = psys.order();
  const Index r = reduced.order();

  Mat e = Mat::Identity(n + r, n + r);
  e.topLeftCorner(n, n) = psys.E;
  Mat a = Mat::Zero(n + r, n + r);
  a.topLeftCorner(n, n) = a_full;
  a.bottomRightCorner(r, r) = reduced.A;
  Mat b(n + r, psys.num_inputs());
  b.topRows(n) = psys.B;
  b.bottomRows(r) = reduced.B;
  Mat c(psys.num_outputs(), n + r);
  c.leftCols(n) = psys.C;
  c.rightCols(r) = -reduced.C;

  const double diff = h2_norm(StateSpaceSystem(std::move(e), std::move(a), std::move(b),
                                               std::move(c), false));
  const double ref = h2_norm(reduced);
  return ref > 0.0 ? diff / ref : diff;
}

} // namespace

std::vector<ErrorSurfaceRow> error_surface(const LowRankParametricSystem& psys,
                                           const ParametricReducedModel& model,
                                           const std::vector<Vec>& param_grid,
                                           const std::vector<double>& freq_grid,
                                           ErrorSurfaceKind kind) {
  if (param_grid.empty()) throw std::invalid_argument("error_surface: empty parameter grid");
  if (kind == ErrorSurfaceKind::FrequencyResponse && freq_grid.empty())
    throw std::invalid_argument("error_surface: empty frequency grid");

  std::vector<ErrorSurfaceRow> rows(param_grid.size());
  std::vector<size_t> idx(param_grid.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto work = [&](size_t i) {
    try {
      rows[i].p = param_grid[i];
      rows[i].error = kind == ErrorSurfaceKind::FrequencyResponse
                          ? frequency_surface_error(psys, model, param_grid[i], freq_grid)
                          : h2_surface_error(psys, model, param_grid[i]);
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
  return rows;
}

void write_error_surface_csv(const std::string& path, const std::vector<ErrorSurfaceRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_error_surface_csv: no rows");
  std::ofstream out(path);
  if (!out) throw Error("write_error_surface_csv: cannot open " + path);
  const Index k = rows.front().p.size();
  for (Index i = 0; i < k; ++i) out << "p" << (i + 1) << ",";
  out << "error\n";
  char buffer[64];
  for (const auto& row : rows) {
    for (Index i = 0; i < k; ++i) {
      std::snprintf(buffer, sizeof(buffer), "%.9e,", row.p[i]);
      out << buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "%.9e\n", row.error);
    out << buffer;
  }
  if (!out) throw Error("write_error_surface_csv: write failed for " + path);
}

} // namespace lrpmor
