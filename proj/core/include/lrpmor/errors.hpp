#pragma once

#include <stdexcept>
#include <string>

namespace lrpmor {

/// Base class for all numerical failures raised by this library.
/// Input validation problems (wrong dimensions, malformed options) use
/// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The pencil (A, E) has an eigenvalue with nonnegative real part.
class UnstablePencil : public Error {
public:
  using Error::Error;
};

/// E is numerically singular (1-norm condition estimate above 1/sqrt(eps)).
class SingularE : public Error {
public:
  using Error::Error;
};

/// A matrix expected to be symmetric positive definite has an eigenvalue <= 0.
class NotSPD : public Error {
public:
  using Error::Error;
};

/// sE - A is numerically singular; s coincides with a pole.
class ResolventSingular : public Error {
public:
  using Error::Error;
};

/// The k x k coupling matrix of the low-rank update is numerically singular.
class CouplingSingular : public Error {
public:
  using Error::Error;
};

/// A negative parameter was passed to a system in square-root parameter mode.
class NegativeParameter : public Error {
public:
  using Error::Error;
};

/// A frequency-response evaluator failed at a grid point.
class EvaluationFailure : public Error {
public:
  using Error::Error;
};

/// Requested reduced order exceeds the system order.
class OrderTooLarge : public Error {
public:
  using Error::Error;
};

/// The least-squares system of the rational fit is rank deficient.
class DegenerateLS : public Error {
public:
  using Error::Error;
};

/// Fewer samples than required for the requested rational degree.
class NotEnoughSamples : public Error {
public:
  using Error::Error;
};

/// The assembled surrogate realization is unstable at the queried parameter.
class SurrogateUnstable : public Error {
public:
  using Error::Error;
};

/// The optimizer exhausted its objective-evaluation budget.
class MaxEvaluations : public Error {
public:
  using Error::Error;
};

/// The surrogate optimization loop exhausted its outer-iteration budget.
class MaxOuterIterations : public Error {
public:
  using Error::Error;
};

/// Malformed input file; the message carries the offending line number.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input file ended before the announced number of entries was read.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A matrix required to be diagonal has off-diagonal entries.
class NotDiagonal : public Error {
public:
  using Error::Error;
};

} // namespace lrpmor
