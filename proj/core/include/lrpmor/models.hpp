#pragma once

#include <optional>
#include <string>

#include "lrpmor/parametric.hpp"
#include "lrpmor/types.hpp"

namespace lrpmor {

/// Diagonal test model with three adjustable resonance peaks: the state
/// matrix is diag(-I6, -1, -2, ..., -tail) perturbed by six rank-one terms
/// that place conjugate pole pairs at -1 +- i p_j, two internal slots per
/// exposed parameter. B = C^T with entries 10 on the leading six states and
/// 1 elsewhere.
LowRankParametricSystem generate_penzl(Index tail);

/// Two coupled rows of spring-connected masses with a shared end mass,
/// internal damping proportional to critical damping, and external viscous
/// dampers whose gains are the system parameters. Index-based quantities
/// (damper offsets, output picks, mass profile breakpoints) scale with
/// d relative to the reference size d = 900.
struct OscillatorConfig {
  Index d = 100;    // masses per row; total masses n = 2d + 1
  double k1 = 500.0, k2 = 200.0, k3 = 300.0;
  double alpha_c = 0.02; // internal damping coefficient
  Index j1 = 0, j2 = 0, j3 = 0; // damper anchors; 0 picks the scaled defaults
  std::optional<Vec> masses;    // explicit mass profile override

  void validate() const;
};

struct OscillatorModel {
  LowRankParametricSystem system; // first-order form, sqrt parameter mode
  Mat M, K, D_int, B2, C2, U2;    // second-order ingredients
  double omega_min = 0.0, omega_max = 0.0; // undamped eigenfrequency range
};

OscillatorModel generate_oscillator(const OscillatorConfig& cfg);

/// Heat-conduction benchmark assembly from user-supplied matrices
///   E x' = (A - p_t A_t - p_b A_b - p_s A_s) x + B u,  y = C x,
/// with A_b, A_s diagonal. The fixed p_t is folded into A0; the nonzero
/// diagonal entries of A_b and A_s become rank-one columns of U and V
/// (magnitude square roots, sign carried by V), grouped under the two
/// exposed parameters (p_b, p_s).
struct ThermalMatrices {
  Mat E, A, A_t, A_b, A_s, B, C;
};

LowRankParametricSystem build_thermal(const ThermalMatrices& mats, double p_t = 1000.0);

} // namespace lrpmor
