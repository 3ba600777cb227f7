#pragma once

#include "lrpmor/types.hpp"

namespace lrpmor {

/// 1-norm condition estimate via LU plus a Hager-style inverse-norm estimator.
double condition_estimate(const Mat& a);

/// Threshold used to declare E numerically singular: cond > 1/sqrt(eps).
double singular_e_threshold();

/// Throws SingularE when the condition estimate of e exceeds the threshold.
void require_invertible_e(const Mat& e, const char* context);

/// Spectrum of a, or of the pencil (a, e) computed on E^{-1}A when e is given.
CVec eigenvalues(const Mat& a);
CVec eigenvalues(const Mat& a, const Mat& e);

double max_real_part(const CVec& eigs);

/// Principal square root of a symmetric positive definite matrix, computed
/// from the symmetric eigendecomposition. Throws NotSPD on an eigenvalue <= 0.
Mat sqrt_spd(const Mat& msym);

} // namespace lrpmor
