#pragma once

#include <string>

#include "lrpmor/types.hpp"

namespace lrpmor {

/// Reads a Matrix Market file (coordinate or array, real, general or
/// symmetric) into a dense matrix; symmetric storage is expanded. Throws
/// ParseError with the offending line number on malformed input and
/// DimensionMismatch when the file ends early.
Mat load_matrix_market(const std::string& path);

/// Writes dense array-format output with full double precision; a read of
/// the written file reproduces the matrix exactly.
void write_matrix_market(const std::string& path, const Mat& m);

} // namespace lrpmor
