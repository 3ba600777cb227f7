#include <algorithm>
#include <cmath>
#include <limits>

#include "lrpmor/errors.hpp"
#include "lrpmor/norms.hpp"
#include "lrpmor/optimize.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

double h2_objective_full(const LowRankParametricSystem& psys, const Vec& p) {
  StateSpaceSystem assembled(psys.E, psys.state_matrix(p), psys.B, psys.C, false);
  return h2_norm(assembled);
}

double h2_objective_reduced(const ParametricReducedModel& model, const Vec& p) {
  StateSpaceSystem assembled = assemble_realization(model, p);
  if (assembled.order() > 0) {
    const double abscissa = max_real_part(eigenvalues(assembled.A));
    if (!(abscissa < 0.0))
      throw SurrogateUnstable("h2_objective_reduced: assembled realization unstable (abscissa " +
                              std::to_string(abscissa) + ")");
  }
  return h2_norm(assembled);
}

namespace {

double guarded(const std::function<double(const Vec&)>& objective, const Vec& p) {
  try {
    return objective(p);
  } catch (const SurrogateUnstable&) {
    return std::numeric_limits<double>::infinity();
  } catch (const UnstablePencil&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::array<Index, 4> escalate_orders(const std::array<Index, 4>& orders, double fraction,
                                     const std::array<Index, 4>& caps) {
  std::array<Index, 4> next{};
  for (size_t i = 0; i < 4; ++i) {
    const Index grow = std::max<Index>(
        1, static_cast<Index>(std::ceil(fraction * static_cast<double>(orders[i]))));
    next[i] = std::min(orders[i] + grow, caps[i]);
  }
  return next;
}

} // namespace

OptimReport surrogate_optimize_alg3(const LowRankParametricSystem& psys, const OptimConfig& cfg,
                                    const Alg1Config& alg1cfg) {
  cfg.validate();
  SubsystemReducer reducer(psys);
  const std::array<Index, 4> caps = reducer.max_orders();

  std::array<Index, 4> orders{};
  for (size_t i = 0; i < 4; ++i) {
    const BTTarget& t = alg1cfg.targets[i];
    if (t.order)
      orders[i] = std::clamp<Index>(*t.order, 1, caps[i]);
    else if (t.tolerance)
      orders[i] = std::max<Index>(1, reducer.factors(static_cast<int>(i)).order_for_tolerance(*t.tolerance));
    else
      throw std::invalid_argument("surrogate_optimize_alg3: unset reduction target");
    orders[i] = std::min(orders[i], caps[i]);
  }

  OptimReport report;
  auto rebuild = [&](const std::array<Index, 4>& ord) {
    return reducer.reduce({BTTarget::by_order(std::max<Index>(1, ord[0])),
                           BTTarget::by_order(std::max<Index>(1, ord[1])),
                           BTTarget::by_order(std::max<Index>(1, ord[2])),
                           BTTarget::by_order(std::max<Index>(1, ord[3]))});
  };
  auto at_caps = [&](const std::array<Index, 4>& ord) {
    for (size_t i = 0; i < 4; ++i)
      if (ord[i] < caps[i]) return false;
    return true;
  };

  auto [model, eps] = rebuild(orders);
  // size the initial reduction so the bound already holds at p0
  while (error_bound_f(cfg.p0, model, eps, alg1cfg.bound_window) > cfg.tau && !at_caps(orders)) {
    orders = escalate_orders(orders, cfg.escalation_alg3, caps);
    std::tie(model, eps) = rebuild(orders);
  }
  report.order_history.push_back({orders[0], orders[1], orders[2], orders[3]});

  Vec p_start = cfg.p0;
  while (true) {
    const auto nm = nelder_mead(
        [&](const Vec& p) { return guarded([&](const Vec& q) { return h2_objective_reduced(model, q); }, p); },
        p_start, cfg.lower, cfg.upper, cfg.nu, cfg.max_evaluations);
    report.objective_evaluations += nm.evaluations;
    ++report.outer_iterations;

    const double f_star = error_bound_f(nm.minimizer, model, eps, alg1cfg.bound_window);
    if (f_star <= cfg.tau) {
      report.p_star = nm.minimizer;
      report.objective_value = nm.value;
      report.error_estimate_at_optimum = f_star;
      return report;
    }
    if (report.outer_iterations >= cfg.max_outer)
      throw MaxOuterIterations("surrogate_optimize_alg3: bound tolerance not met within " +
                               std::to_string(cfg.max_outer) + " outer iterations");
    p_start = nm.minimizer;
    do {
      orders = escalate_orders(orders, cfg.escalation_alg3, caps);
      std::tie(model, eps) = rebuild(orders);
    } while (error_bound_f(p_start, model, eps, alg1cfg.bound_window) > cfg.tau &&
             !at_caps(orders));
    report.order_history.push_back({orders[0], orders[1], orders[2], orders[3]});
  }
}

Index default_vf_order(const LowRankParametricSystem& psys) {
  const Index by_size = static_cast<Index>(
      std::ceil(static_cast<double>(psys.order()) / 15.0));
  return std::min<Index>(200, std::max<Index>(psys.k_internal() + 2, by_size));
}

OptimReport surrogate_optimize_alg4(const LowRankParametricSystem& psys, const OptimConfig& cfg,
                                    const SamplingSpec& sampling, Index r0, Index vf_max_iter,
                                    double vf_pole_tol) {
  cfg.validate();
  if (r0 < 1) throw std::invalid_argument("surrogate_optimize_alg4: r0 must be >= 1");
  const OfflineSamples off = sample_subsystems(psys, log_imag_points(sampling));
  const Index r_cap = off.size() / 2; // LS solvability limit

  OptimReport report;
  Index r = std::min(r0, r_cap);
  std::vector<Complex> poles = initial_poles(sampling.omega_min, sampling.omega_max, r);

  auto fit_at = [&](const Vec& p) {
    VFResult vf = vf_reduce_at_parameter(off, p, r, poles, vf_max_iter, vf_pole_tol);
    ++report.vf_calls;
    if (report.vf_calls > 1) {
      ++report.vf_warm_calls;
      if (vf.iterations <= 2) ++report.vf_warm_fast;
    }
    poles = vf.poles;
    return vf;
  };
  auto grow = [&]() {
    if (r >= r_cap)
      throw MaxOuterIterations(
          "surrogate_optimize_alg4: degree cap reached without meeting the LS tolerance");
    const Index delta = std::min<Index>(
        r_cap - r, std::max<Index>(1, static_cast<Index>(std::ceil(cfg.escalation_alg4 *
                                                                   static_cast<double>(r)))));
    const std::vector<Complex> fresh =
        initial_poles(sampling.omega_min, sampling.omega_max, delta);
    poles.insert(poles.end(), fresh.begin(), fresh.end());
    r += delta;
  };

  // size the initial degree so e(p0) is already below tau
  VFResult vf0 = fit_at(cfg.p0);
  while (vf0.final_ls_error > cfg.tau) {
    grow();
    vf0 = fit_at(cfg.p0);
  }
  report.order_history.push_back({r});

  Vec p_start = cfg.p0;
  while (true) {
    const auto nm = nelder_mead([&](const Vec& p) { return h2_norm(fit_at(p).model); }, p_start,
                                cfg.lower, cfg.upper, cfg.nu, cfg.max_evaluations);
    report.objective_evaluations += nm.evaluations;
    ++report.outer_iterations;

    const double e_star = fit_at(nm.minimizer).final_ls_error;
    if (e_star <= cfg.tau) {
      report.p_star = nm.minimizer;
      report.objective_value = nm.value;
      report.error_estimate_at_optimum = e_star;
      return report;
    }
    if (report.outer_iterations >= cfg.max_outer)
      throw MaxOuterIterations("surrogate_optimize_alg4: LS tolerance not met within " +
                               std::to_string(cfg.max_outer) + " outer iterations");
    p_start = nm.minimizer;
    do {
      grow();
    } while (fit_at(p_start).final_ls_error > cfg.tau && r < r_cap);
    report.order_history.push_back({r});
  }
}

OptimReport optimize_full_h2(const LowRankParametricSystem& psys, const OptimConfig& cfg) {
  cfg.validate();
  OptimReport report;
  const auto nm = nelder_mead(
      [&](const Vec& p) { return guarded([&](const Vec& q) { return h2_objective_full(psys, q); }, p); },
      cfg.p0, cfg.lower, cfg.upper, cfg.nu, cfg.max_evaluations);
  report.p_star = nm.minimizer;
  report.objective_value = nm.value;
  report.outer_iterations = 1;
  report.objective_evaluations = nm.evaluations;
  return report;
}

} // namespace lrpmor
