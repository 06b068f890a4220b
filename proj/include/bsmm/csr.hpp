#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bsmm/types.hpp"

namespace bsmm {

/// Row-major dense matrix. Used for the B operand and the C result.
template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t n_rows, index_t n_cols);
  DenseMatrix(index_t n_rows, index_t n_cols, std::vector<T> data);

  index_t n_rows() const { return n_rows_; }
  index_t n_cols() const { return n_cols_; }

  T& operator()(index_t i, index_t j) { return data_[static_cast<std::size_t>(i * n_cols_ + j)]; }
  const T& operator()(index_t i, index_t j) const {
    return data_[static_cast<std::size_t>(i * n_cols_ + j)];
  }

  std::span<T> row(index_t i) { return {data_.data() + i * n_cols_, static_cast<std::size_t>(n_cols_)}; }
  std::span<const T> row(index_t i) const {
    return {data_.data() + i * n_cols_, static_cast<std::size_t>(n_cols_)};
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  index_t n_rows_ = 0;
  index_t n_cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
struct Triplet {
  index_t row;
  index_t col;
  T value;
};

/// How explicit numeric zeros are treated when assembling from triplets.
enum class ZeroPolicy { drop, keep };

/// Compressed sparse row matrix. Immutable once constructed; the constructor
/// checks every structural invariant and throws std::invalid_argument.
template <Scalar T>
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_{0} {}
  CsrMatrix(index_t n_rows, index_t n_cols, std::vector<index_t> row_ptr,
            std::vector<index_t> col_idx, std::vector<T> values);

  /// Assemble from unordered coordinates. Duplicates are summed, then zeros
  /// are dropped unless the policy says otherwise.
  static CsrMatrix from_triplets(index_t n_rows, index_t n_cols, std::vector<Triplet<T>> entries,
                                 ZeroPolicy zeros = ZeroPolicy::drop);

  static CsrMatrix identity(index_t n);

  index_t n_rows() const { return n_rows_; }
  index_t n_cols() const { return n_cols_; }
  index_t nnz() const { return static_cast<index_t>(values_.size()); }

  std::span<const index_t> row_ptr() const { return row_ptr_; }
  std::span<const index_t> col_idx() const { return col_idx_; }
  std::span<const T> values() const { return values_; }

  std::span<const index_t> row_cols(index_t i) const {
    return std::span<const index_t>(col_idx_).subspan(
        static_cast<std::size_t>(row_ptr_[i]), static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]));
  }
  std::span<const T> row_values(index_t i) const {
    return std::span<const T>(values_).subspan(
        static_cast<std::size_t>(row_ptr_[i]), static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]));
  }

  bool operator==(const CsrMatrix&) const = default;

 private:
  index_t n_rows_ = 0;
  index_t n_cols_ = 0;
  std::vector<index_t> row_ptr_;
  std::vector<index_t> col_idx_;
  std::vector<T> values_;
};

/// Default ceiling on dense materialization (elements).
inline constexpr index_t kDefaultDenseLimit = index_t{1} << 28;

template <Scalar T>
DenseMatrix<T> dense_from_csr(const CsrMatrix<T>& a, index_t max_elements = kDefaultDenseLimit);

template <Scalar T>
CsrMatrix<T> transpose(const CsrMatrix<T>& a);

// Reference kernels. Both are serial and accumulate in ascending inner index,
// so they serve as oracles for the blocked executor.

/// C = A * B, row by row, nonzeros of each row in ascending column order.
template <Scalar T>
DenseMatrix<T> csr_spmm_reference(const CsrMatrix<T>& a, const DenseMatrix<T>& b);

/// Textbook triple loop, k ascending.
template <Scalar T>
DenseMatrix<T> dense_gemm_reference(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

}  // namespace bsmm
