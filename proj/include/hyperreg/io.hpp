#pragma once

#include <string>

#include "hyperreg/errors.hpp"
#include "hyperreg/linalg.hpp"

namespace hyperreg {

/// The Matrix Market banner names a layout this reader does not accept.
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Reads "%%MatrixMarket matrix coordinate real general" (1-based indices,
/// duplicates summed). Errors carry "path:line: ..." prefixes.
SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const SparseMatrix& A);

/// One decimal per line. Blank lines and text after '#' are ignored.
DenseVector read_vector(const std::string& path);
void write_vector(const std::string& path, const DenseVector& v);

/// Writes to "<path>.tmp" and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// printf("%.17g"): round-trips every finite double.
std::string format_double(double v);

}  // namespace hyperreg
