#include "lrpmor/reduced_model.hpp"

#include <limits>
#include <string>

#include "lrpmor/errors.hpp"
#include "lrpmor/norms.hpp"
#include "lrpmor/spectral.hpp"

namespace lrpmor {

namespace {

Vec expand_with(const std::vector<Index>& slot_of_param, Index num_params, ParamMode mode,
                const Vec& p) {
  if (p.size() != num_params)
    throw std::invalid_argument("ParametricReducedModel: wrong parameter count");
  if (mode == ParamMode::NonnegativeSqrt && p.size() > 0 && p.minCoeff() < 0.0)
    throw NegativeParameter("ParametricReducedModel: negative parameter in square-root mode");
  Vec slots(static_cast<Index>(slot_of_param.size()));
  for (Index i = 0; i < slots.size(); ++i) slots[i] = p[slot_of_param[static_cast<size_t>(i)]];
  return slots;
}

} // namespace

Vec ParametricReducedModel::expand_params(const Vec& p) const {
  return expand_with(slot_of_param, num_params, mode, p);
}

ParametricReducedModel make_parametric_reduced_model(StateSpaceSystem h1, StateSpaceSystem h2,
                                                     StateSpaceSystem h3, StateSpaceSystem h4,
                                                     ParamMode mode,
                                                     std::vector<Index> slot_of_param,
                                                     Index num_params) {
  const Index k = h3.num_inputs();
  if (h3.num_outputs() != k)
    throw std::invalid_argument("ParametricReducedModel: h3 must be square (k x k)");
  if (h2.num_inputs() != k || h4.num_outputs() != k)
    throw std::invalid_argument("ParametricReducedModel: h2 inputs and h4 outputs must equal k");
  if (h1.num_outputs() != h2.num_outputs() || h1.num_inputs() != h4.num_inputs())
    throw std::invalid_argument("ParametricReducedModel: h1 dimensions inconsistent with h2/h4");
  if (static_cast<Index>(slot_of_param.size()) != k)
    throw std::invalid_argument("ParametricReducedModel: slot map size must equal k");
  const StateSpaceSystem* subs[4] = {&h1, &h2, &h3, &h4};
  for (int i = 0; i < 4; ++i) {
    if (!subs[i]->has_identity_e())
      throw std::invalid_argument("ParametricReducedModel: subsystems must carry identity E");
    if (subs[i]->order() > 0) {
      const double abscissa = max_real_part(eigenvalues(subs[i]->A));
      if (!(abscissa < 0.0))
        throw UnstablePencil("ParametricReducedModel: subsystem " + std::to_string(i + 1) +
                             " is not asymptotically stable (abscissa " +
                             std::to_string(abscissa) + ")");
    }
  }
  ParametricReducedModel model;
  model.h1 = std::move(h1);
  model.h2 = std::move(h2);
  model.h3 = std::move(h3);
  model.h4 = std::move(h4);
  model.orders = {model.h1.order(), model.h2.order(), model.h3.order(), model.h4.order()};
  model.mode = mode;
  model.slot_of_param = std::move(slot_of_param);
  model.num_params = num_params;
  return model;
}

CMat eval_reduced(const ParametricReducedModel& model, Complex s, const Vec& p) {
  return eval_parametric_smw(eval_transfer(model.h1, s), eval_transfer(model.h2, s),
                             eval_transfer(model.h3, s), eval_transfer(model.h4, s),
                             model.expand_params(p), model.mode);
}

StateSpaceSystem assemble_realization(const ParametricReducedModel& model, const Vec& p) {
  // In both parameter modes the coupling weight entering the realization is
  // diag of the expanded slots: in sqrt mode D(p)^2 = diag(p), in general
  // mode the diagonal is applied once.
  const Vec w = model.expand_params(p);
  const Index r1 = model.h1.order();
  const Index r2 = model.h2.order();
  const Index r3 = model.h3.order();
  const Index r4 = model.h4.order();
  const Index n = r1 + r2 + r3 + r4;
  const Index m = model.h1.num_inputs();
  const Index l = model.h1.num_outputs();

  Mat a = Mat::Zero(n, n);
  Mat b = Mat::Zero(n, m);
  Mat c = Mat::Zero(l, n);

  const Index o1 = 0, o2 = r1, o3 = r1 + r2, o4 = r1 + r2 + r3;
  a.block(o1, o1, r1, r1) = model.h1.A;
  a.block(o2, o2, r2, r2) = model.h2.A;
  a.block(o3, o3, r3, r3) = model.h3.A - model.h3.B * w.asDiagonal() * model.h3.C;
  a.block(o4, o4, r4, r4) = model.h4.A;
  a.block(o2, o3, r2, r3) = -model.h2.B * w.asDiagonal() * model.h3.C;
  a.block(o2, o4, r2, r4) = model.h2.B * w.asDiagonal() * model.h4.C;
  a.block(o3, o4, r3, r4) = model.h3.B * w.asDiagonal() * model.h4.C;

  b.middleRows(o1, r1) = model.h1.B;
  b.middleRows(o4, r4) = model.h4.B;

  c.middleCols(o1, r1) = model.h1.C;
  c.middleCols(o2, r2) = -model.h2.C;

  return StateSpaceSystem::with_identity_e(std::move(a), std::move(b), std::move(c));
}

StabilityReport check_uniform_stability(const ParametricReducedModel& model,
                                        const std::vector<Vec>& param_samples, double margin) {
  if (param_samples.empty())
    throw std::invalid_argument("check_uniform_stability: no parameter samples given");
  StabilityReport report;
  report.worst_real_part = -std::numeric_limits<double>::infinity();

  // spectra of the decoupled blocks do not depend on p
  double fixed_worst = -std::numeric_limits<double>::infinity();
  for (const StateSpaceSystem* sub : {&model.h1, &model.h2, &model.h4})
    if (sub->order() > 0) fixed_worst = std::max(fixed_worst, max_real_part(eigenvalues(sub->A)));

  for (const Vec& p : param_samples) {
    double worst = fixed_worst;
    if (model.h3.order() > 0) {
      const Vec w = model.expand_params(p);
      const Mat closed = model.h3.A - model.h3.B * w.asDiagonal() * model.h3.C;
      worst = std::max(worst, max_real_part(eigenvalues(closed)));
    }
    if (worst > report.worst_real_part) {
      report.worst_real_part = worst;
      report.offending_p = p;
    }
  }
  report.stable = report.worst_real_part < -margin;
  if (report.stable) report.offending_p.reset();
  return report;
}

PositiveRealReport check_positive_real_sampled(const StateSpaceSystem& sys,
                                               const std::vector<double>& freq_grid) {
  if (sys.num_inputs() != sys.num_outputs())
    throw std::invalid_argument("check_positive_real_sampled: system must be square");
  PositiveRealReport report;
  report.min_herm_eig = std::numeric_limits<double>::infinity();
  for (double omega : freq_grid) {
    const CMat h = eval_transfer(sys, Complex(0.0, omega));
    const CMat herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
    report.min_herm_eig = std::min(report.min_herm_eig, es.eigenvalues().minCoeff());
  }
  report.passed = report.min_herm_eig >= -1e-10;
  return report;
}

HinfBoundReport check_hinf_bound(const StateSpaceSystem& sys, double p_max, Index grid_points) {
  if (!(p_max > 0.0)) throw std::invalid_argument("check_hinf_bound: p_max must be positive");
  HinfBoundReport report;
  const auto band = active_band(sys);
  report.norm_estimate =
      linf_norm_estimate(transfer_evaluator(sys), band.first, band.second, grid_points);
  report.threshold = 1.0 / p_max;
  report.passed = report.norm_estimate < report.threshold;
  return report;
}

} // namespace lrpmor
