#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "bsmm/csr.hpp"

namespace bsmm {

/// Raised for malformed or unsupported Matrix Market input. `line()` is the
/// 1-based line where the problem was found, or 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct MatrixMarketOptions {
  /// Retain explicit zeros as structural entries (they still count for blocking).
  bool keep_explicit_zeros = false;
};

/// Reads the coordinate subset: fields real|integer|pattern, symmetry
/// general|symmetric. Symmetric input is expanded to general storage.
template <Scalar T>
CsrMatrix<T> read_matrix_market(std::istream& in, const MatrixMarketOptions& opts = {});

template <Scalar T>
CsrMatrix<T> read_matrix_market(const std::filesystem::path& path, const MatrixMarketOptions& opts = {});

/// Writes `coordinate real general` with shortest round-trip value formatting.
template <Scalar T>
void write_matrix_market(std::ostream& out, const CsrMatrix<T>& a);

template <Scalar T>
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix<T>& a);

// Plain-text dense format: a "rows cols" line followed by one line per row.

template <Scalar T>
DenseMatrix<T> read_dense_text(std::istream& in);

template <Scalar T>
void write_dense_text(std::ostream& out, const DenseMatrix<T>& m);

}  // namespace bsmm
