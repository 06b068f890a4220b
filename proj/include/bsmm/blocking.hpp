#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsmm/csr.hpp"

namespace bsmm {

/// Block shape h x w. Defaults to 16x8.
struct BlockDims {
  index_t h = 16;
  index_t w = 8;

  BlockDims() = default;
  BlockDims(index_t h_, index_t w_);

  index_t area() const { return h * w; }
  bool operator==(const BlockDims&) const = default;
};

/// Parses "HxW" (e.g. "16x8").
BlockDims parse_block_dims(const std::string& text);
std::string to_string(const BlockDims& dims);

/// Blocked CSR: CSR over dense h x w blocks. Each block's h*w values are stored
/// contiguously in row-major order; the block index arrays mirror CSR.
template <Scalar T>
class BcsrMatrix {
 public:
  BcsrMatrix() : block_row_ptr_{0} {}
  /// Validates index structure; throws std::invalid_argument.
  BcsrMatrix(index_t n_rows, index_t n_cols, BlockDims dims, std::vector<index_t> block_row_ptr,
             std::vector<index_t> block_col_idx, std::vector<T> block_values);

  index_t n_rows() const { return n_rows_; }
  index_t n_cols() const { return n_cols_; }
  const BlockDims& dims() const { return dims_; }
  index_t n_block_rows() const { return ceil_div(n_rows_, dims_.h); }
  index_t n_block_cols() const { return ceil_div(n_cols_, dims_.w); }
  /// Number of stored blocks (n_e).
  index_t n_blocks() const { return static_cast<index_t>(block_col_idx_.size()); }
  index_t grid_blocks() const { return n_block_rows() * n_block_cols(); }

  std::span<const index_t> block_row_ptr() const { return block_row_ptr_; }
  std::span<const index_t> block_col_idx() const { return block_col_idx_; }
  std::span<const T> block_values() const { return block_values_; }

  /// Dense h*w values of stored block `b`.
  std::span<const T> block(index_t b) const {
    return std::span<const T>(block_values_).subspan(static_cast<std::size_t>(b * dims_.area()),
                                                     static_cast<std::size_t>(dims_.area()));
  }

  bool operator==(const BcsrMatrix&) const = default;

 private:
  index_t n_rows_ = 0;
  index_t n_cols_ = 0;
  BlockDims dims_;
  std::vector<index_t> block_row_ptr_;
  std::vector<index_t> block_col_idx_;
  std::vector<T> block_values_;
};

/// Materializes every block holding at least one structural entry of `a`;
/// the rest of each block (including ragged borders) is zero padding.
/// Block rows are converted in parallel; the output does not depend on the
/// thread count.
template <Scalar T>
BcsrMatrix<T> to_bcsr(const CsrMatrix<T>& a, BlockDims dims = {});

/// Drops padding: emits exactly the nonzero-valued block entries.
template <Scalar T>
CsrMatrix<T> from_bcsr(const BcsrMatrix<T>& ab);

/// Block count of `a` under `dims` without materializing values.
template <Scalar T>
index_t count_blocks(const CsrMatrix<T>& a, BlockDims dims);

/// Stored blocks in each block row of `a` under `dims`.
template <Scalar T>
std::vector<index_t> blocks_per_block_row(const CsrMatrix<T>& a, BlockDims dims);

struct BlockCountBounds {
  index_t lower = 0;
  index_t upper = 0;
};

/// lower = ceil(nnz/(h*w)) (every block full), upper = min(grid blocks, nnz)
/// (one entry per block). Throws std::invalid_argument if nnz > n_rows*n_cols.
BlockCountBounds block_count_bounds(index_t nnz, index_t n_rows, index_t n_cols, BlockDims dims);

struct BlockStats {
  index_t n_e = 0;
  index_t nnz = 0;
  BlockDims dims;
  std::vector<index_t> blocks_per_row;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double padding_ratio = 0.0;
  double density = 0.0;
};

/// Statistics of blocks per block row. With no blocks the padding ratio and
/// density are reported as 0.
template <Scalar T>
BlockStats block_stats(const BcsrMatrix<T>& ab, index_t nnz);

BlockStats block_stats_from_counts(std::vector<index_t> blocks_per_row, index_t nnz, BlockDims dims);

// Binary dump. Layout (little-endian):
//   char[8] magic "BSMMBCSR"; u32 version; u32 scalar bytes (4|8);
//   u64 n_rows, n_cols, h, w, n_e;
//   i64 block_row_ptr[n_block_rows+1]; i64 block_col_idx[n_e];
//   scalar block_values[n_e*h*w]
inline constexpr std::uint32_t kBcsrFormatVersion = 1;

template <Scalar T>
void write_bcsr(std::ostream& out, const BcsrMatrix<T>& ab);
template <Scalar T>
void write_bcsr(const std::filesystem::path& path, const BcsrMatrix<T>& ab);

/// Throws std::runtime_error on bad magic, version or scalar width.
template <Scalar T>
BcsrMatrix<T> read_bcsr(std::istream& in);
template <Scalar T>
BcsrMatrix<T> read_bcsr(const std::filesystem::path& path);

}  // namespace bsmm
