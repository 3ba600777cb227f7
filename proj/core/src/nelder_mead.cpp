#include <algorithm>
#include <cmath>
#include <limits>

#include "lrpmor/errors.hpp"
#include "lrpmor/optimize.hpp"

namespace lrpmor {

void OptimConfig::validate() const {
  const Index k = p0.size();
  if (lower.size() != k || upper.size() != k)
    throw std::invalid_argument("OptimConfig: bounds must match p0 dimension");
  for (Index i = 0; i < k; ++i)
    if (!(lower[i] <= p0[i]) || !(p0[i] <= upper[i]) || !(lower[i] < upper[i]))
      throw std::invalid_argument("OptimConfig: need lower <= p0 <= upper componentwise");
  if (!(nu > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("OptimConfig: nu and tau must be positive");
  if (!(escalation_alg3 > 0.0 && escalation_alg3 < 1.0) ||
      !(escalation_alg4 > 0.0 && escalation_alg4 < 1.0))
    throw std::invalid_argument("OptimConfig: escalation fractions must lie in (0, 1)");
  if (max_outer < 1) throw std::invalid_argument("OptimConfig: max_outer must be >= 1");
}

namespace {

struct BoundTransform {
  Vec lo, span;

  Vec to_p(const Vec& z) const {
    Vec p(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double s = std::sin(z[i]);
      p[i] = lo[i] + span[i] * s * s;
    }
    return p;
  }

  Vec to_z(const Vec& p) const {
    Vec z(p.size());
    for (Index i = 0; i < p.size(); ++i) {
      const double t = std::clamp((p[i] - lo[i]) / span[i], 0.0, 1.0);
      z[i] = std::asin(std::sqrt(t));
    }
    return z;
  }
};

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& p0,
                             const Vec& lower, const Vec& upper, double nu,
                             Index max_evaluations) {
  const Index k = p0.size();
  if (k < 1) throw std::invalid_argument("nelder_mead: empty parameter vector");
  if (lower.size() != k || upper.size() != k)
    throw std::invalid_argument("nelder_mead: bounds must match dimension");
  for (Index i = 0; i < k; ++i)
    if (!(lower[i] < upper[i])) throw std::invalid_argument("nelder_mead: need lower < upper");
  if (max_evaluations <= 0) max_evaluations = 2000 * k;

  BoundTransform tf{lower, upper - lower};
  Index evals = 0;
  auto eval = [&](const Vec& z) {
    if (evals >= max_evaluations)
      throw MaxEvaluations("nelder_mead: evaluation budget of " +
                           std::to_string(max_evaluations) + " exhausted");
    ++evals;
    const double value = objective(tf.to_p(z));
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  };

  // initial simplex: z0 plus a fixed step per coordinate
  const Index nv = k + 1;
  std::vector<Vec> simplex(static_cast<size_t>(nv));
  std::vector<double> values(static_cast<size_t>(nv));
  simplex[0] = tf.to_z(p0);
  values[0] = eval(simplex[0]);
  for (Index i = 0; i < k; ++i) {
    Vec z = simplex[0];
    z[i] += 0.05;
    simplex[static_cast<size_t>(i + 1)] = z;
    values[static_cast<size_t>(i + 1)] = eval(z);
  }

  auto order = [&]() {
    std::vector<Index> perm(static_cast<size_t>(nv));
    for (Index i = 0; i < nv; ++i) perm[static_cast<size_t>(i)] = i;
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return values[static_cast<size_t>(a)] < values[static_cast<size_t>(b)]; });
    std::vector<Vec> s2(static_cast<size_t>(nv));
    std::vector<double> v2(static_cast<size_t>(nv));
    for (Index i = 0; i < nv; ++i) {
      s2[static_cast<size_t>(i)] = simplex[static_cast<size_t>(perm[static_cast<size_t>(i)])];
      v2[static_cast<size_t>(i)] = values[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  constexpr double rho = 1.0;   // reflection
  constexpr double chi = 2.0;   // expansion
  constexpr double gamma = 0.5; // contraction
  constexpr double sigma = 0.5; // shrink

  while (true) {
    order();
    double diameter = 0.0;
    double spread = 0.0;
    for (Index i = 1; i < nv; ++i) {
      diameter = std::max(diameter,
                          (simplex[static_cast<size_t>(i)] - simplex[0]).cwiseAbs().maxCoeff());
      if (std::isfinite(values[static_cast<size_t>(i)]) && std::isfinite(values[0]))
        spread = std::max(spread, values[static_cast<size_t>(i)] - values[0]);
      else if (values[static_cast<size_t>(i)] != values[0])
        spread = std::numeric_limits<double>::infinity();
    }
    if (diameter < nu && spread < nu) break;

    Vec centroid = Vec::Zero(k);
    for (Index i = 0; i < nv - 1; ++i) centroid += simplex[static_cast<size_t>(i)];
    centroid /= static_cast<double>(nv - 1);
    const Vec& worst = simplex[static_cast<size_t>(nv - 1)];
    const double f_worst = values[static_cast<size_t>(nv - 1)];
    const double f_best = values[0];
    const double f_second = values[static_cast<size_t>(nv - 2)];

    const Vec xr = centroid + rho * (centroid - worst);
    const double fr = eval(xr);
    if (fr < f_best) {
      const Vec xe = centroid + chi * rho * (centroid - worst);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[static_cast<size_t>(nv - 1)] = xe;
        values[static_cast<size_t>(nv - 1)] = fe;
      } else {
        simplex[static_cast<size_t>(nv - 1)] = xr;
        values[static_cast<size_t>(nv - 1)] = fr;
      }
      continue;
    }
    if (fr < f_second) {
      simplex[static_cast<size_t>(nv - 1)] = xr;
      values[static_cast<size_t>(nv - 1)] = fr;
      continue;
    }
    if (fr < f_worst) {
      const Vec xc = centroid + gamma * rho * (centroid - worst);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[static_cast<size_t>(nv - 1)] = xc;
        values[static_cast<size_t>(nv - 1)] = fc;
        continue;
      }
    } else {
      const Vec xcc = centroid - gamma * (centroid - worst);
      const double fcc = eval(xcc);
      if (fcc < f_worst) {
        simplex[static_cast<size_t>(nv - 1)] = xcc;
        values[static_cast<size_t>(nv - 1)] = fcc;
        continue;
      }
    }
    for (Index i = 1; i < nv; ++i) {
      simplex[static_cast<size_t>(i)] =
          simplex[0] + sigma * (simplex[static_cast<size_t>(i)] - simplex[0]);
      values[static_cast<size_t>(i)] = eval(simplex[static_cast<size_t>(i)]);
    }
  }

  order();
  NelderMeadResult result;
  result.minimizer = tf.to_p(simplex[0]);
  result.value = values[0];
  result.evaluations = evals;
  return result;
}

} // namespace lrpmor
