#include "lrpmor/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lrpmor/errors.hpp"

namespace lrpmor {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& path, long line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::ifstream in;
  long line_no = 0;

  explicit LineReader(const std::string& path) : in(path) {}

  // next non-comment, non-blank line; false at EOF
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto first = raw.find_first_not_of(" \t\r\n");
      if (first == std::string::npos) continue;
      if (raw[first] == '%') continue;
      out = raw;
      return true;
    }
    return false;
  }
};

} // namespace

Mat load_matrix_market(const std::string& path) {
  LineReader reader(path);
  if (!reader.in) throw ParseError(path + ": cannot open file");

  std::string banner;
  if (!std::getline(reader.in, banner)) fail(path, 1, "empty file");
  reader.line_no = 1;
  std::istringstream bs(lower(banner));
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix")
    fail(path, 1, "not a Matrix Market matrix file");
  if (format != "coordinate" && format != "array")
    fail(path, 1, "unsupported format '" + format + "' (coordinate or array required)");
  if (field != "real" && field != "integer")
    fail(path, 1, "unsupported field '" + field + "' (real data required)");
  if (symmetry != "general" && symmetry != "symmetric")
    fail(path, 1, "unsupported symmetry '" + symmetry + "' (general or symmetric required)");
  const bool coordinate = format == "coordinate";
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!reader.next(line)) fail(path, reader.line_no, "missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  if (coordinate) {
    if (!(size_line >> rows >> cols >> nnz)) fail(path, reader.line_no, "malformed size line");
  } else {
    if (!(size_line >> rows >> cols)) fail(path, reader.line_no, "malformed size line");
  }
  if (rows < 0 || cols < 0) fail(path, reader.line_no, "negative dimensions");
  if (symmetric && rows != cols) fail(path, reader.line_no, "symmetric matrix must be square");

  Mat m = Mat::Zero(rows, cols);
  if (coordinate) {
    for (long e = 0; e < nnz; ++e) {
      if (!reader.next(line))
        throw DimensionMismatch(path + ": expected " + std::to_string(nnz) +
                                " entries, file ended after " + std::to_string(e));
      std::istringstream entry(line);
      long i = 0, j = 0;
      double value = 0.0;
      if (!(entry >> i >> j >> value)) fail(path, reader.line_no, "malformed entry");
      if (i < 1 || i > rows || j < 1 || j > cols)
        fail(path, reader.line_no, "index out of range");
      if (!std::isfinite(value)) fail(path, reader.line_no, "nonfinite value");
      m(i - 1, j - 1) += value;
      if (symmetric && i != j) m(j - 1, i - 1) += value;
    }
  } else {
    // array format: column-major dense; symmetric stores the lower triangle
    const long expected = symmetric ? rows * (rows + 1) / 2 : rows * cols;
    long count = 0;
    long i = 0, j = 0;
    if (symmetric) i = 0;
    for (long e = 0; e < expected; ++e) {
      if (!reader.next(line))
        throw DimensionMismatch(path + ": expected " + std::to_string(expected) +
                                " values, file ended after " + std::to_string(count));
      std::istringstream entry(line);
      double value = 0.0;
      if (!(entry >> value)) fail(path, reader.line_no, "malformed value");
      if (!std::isfinite(value)) fail(path, reader.line_no, "nonfinite value");
      m(i, j) = value;
      if (symmetric && i != j) m(j, i) = value;
      ++count;
      ++i;
      if (i >= rows) {
        ++j;
        i = symmetric ? j : 0;
      }
    }
  }
  return m;
}

void write_matrix_market(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw Error("write_matrix_market: cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buffer[64];
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buffer, sizeof(buffer), "%.17g\n", m(i, j));
      out << buffer;
    }
  if (!out) throw Error("write_matrix_market: write failed for " + path);
}

} // namespace lrpmor
