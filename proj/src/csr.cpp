#include "bsmm/csr.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace bsmm {

template <Scalar T>
DenseMatrix<T>::DenseMatrix(index_t n_rows, index_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), data_(static_cast<std::size_t>(n_rows * n_cols), T{0}) {
  if (n_rows < 0 || n_cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
}

template <Scalar T>
DenseMatrix<T>::DenseMatrix(index_t n_rows, index_t n_cols, std::vector<T> data)
    : n_rows_(n_rows), n_cols_(n_cols), data_(std::move(data)) {
  if (n_rows < 0 || n_cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
  if (static_cast<index_t>(data_.size()) != n_rows * n_cols)
    throw std::invalid_argument("DenseMatrix: data length does not match shape");
}

template <Scalar T>
CsrMatrix<T>::CsrMatrix(index_t n_rows, index_t n_cols, std::vector<index_t> row_ptr,
                        std::vector<index_t> col_idx, std::vector<T> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (n_rows_ < 0 || n_cols_ < 0) throw std::invalid_argument("CsrMatrix: negative dimension");
  if (static_cast<index_t>(row_ptr_.size()) != n_rows_ + 1)
    throw std::invalid_argument("CsrMatrix: row_ptr must have n_rows+1 entries");
  if (col_idx_.size() != values_.size())
    throw std::invalid_argument("CsrMatrix: col_idx and values differ in length");
  if (row_ptr_.front() != 0) throw std::invalid_argument("CsrMatrix: row_ptr[0] must be 0");
  if (row_ptr_.back() != static_cast<index_t>(values_.size()))
    throw std::invalid_argument("CsrMatrix: row_ptr[n_rows] must equal nnz");
  for (index_t i = 0; i < n_rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw std::invalid_argument("CsrMatrix: row_ptr decreasing");
    for (index_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const index_t c = col_idx_[p];
      if (c < 0 || c >= n_cols_)
        throw std::invalid_argument("CsrMatrix: column index out of range in row " + std::to_string(i));
      if (p > row_ptr_[i] && col_idx_[p - 1] >= c)
        throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " + std::to_string(i));
    }
  }
}

template <Scalar T>
CsrMatrix<T> CsrMatrix<T>::from_triplets(index_t n_rows, index_t n_cols, std::vector<Triplet<T>> entries,
                                         ZeroPolicy zeros) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
  }
  // Stable so duplicates are summed in input order.
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet<T>& a, const Triplet<T>& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<index_t> row_ptr(static_cast<std::size_t>(n_rows + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());

  for (std::size_t p = 0; p < entries.size();) {
    const index_t r = entries[p].row;
    const index_t c = entries[p].col;
    T sum = entries[p].value;
    std::size_t q = p + 1;
    for (; q < entries.size() && entries[q].row == r && entries[q].col == c; ++q) sum += entries[q].value;
    p = q;
    if (zeros == ZeroPolicy::drop && sum == T{0}) continue;
    col_idx.push_back(c);
    values.push_back(sum);
    ++row_ptr[static_cast<std::size_t>(r + 1)];
  }
  for (index_t i = 0; i < n_rows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(n_rows, n_cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
CsrMatrix<T> CsrMatrix<T>::identity(index_t n) {
  std::vector<index_t> row_ptr(static_cast<std::size_t>(n + 1));
  std::vector<index_t> col_idx(static_cast<std::size_t>(n));
  for (index_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (index_t i = 0; i < n; ++i) col_idx[i] = i;
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<T>(static_cast<std::size_t>(n), T{1}));
}

template <Scalar T>
DenseMatrix<T> dense_from_csr(const CsrMatrix<T>& a, index_t max_elements) {
  if (a.n_cols() != 0 && a.n_rows() > max_elements / a.n_cols())
    throw std::length_error("dense_from_csr: " + std::to_string(a.n_rows()) + "x" + std::to_string(a.n_cols()) +
                            " exceeds the dense size limit");
  DenseMatrix<T> d(a.n_rows(), a.n_cols());
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) d(i, cols[p]) = vals[p];
  }
  return d;
}

template <Scalar T>
CsrMatrix<T> transpose(const CsrMatrix<T>& a) {
  std::vector<index_t> row_ptr(static_cast<std::size_t>(a.n_cols() + 1), 0);
  for (index_t c : a.col_idx()) ++row_ptr[static_cast<std::size_t>(c + 1)];
  for (index_t j = 0; j < a.n_cols(); ++j) row_ptr[j + 1] += row_ptr[j];

  std::vector<index_t> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<index_t> col_idx(static_cast<std::size_t>(a.nnz()));
  std::vector<T> values(static_cast<std::size_t>(a.nnz()));
  // Rows visited in ascending order keep each output row sorted.
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      const index_t dst = next[cols[p]]++;
      col_idx[dst] = i;
      values[dst] = vals[p];
    }
  }
  return CsrMatrix<T>(a.n_cols(), a.n_rows(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
DenseMatrix<T> csr_spmm_reference(const CsrMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.n_cols() != b.n_rows())
    throw std::invalid_argument("csr_spmm_reference: A is " + std::to_string(a.n_rows()) + "x" +
                                std::to_string(a.n_cols()) + " but B has " + std::to_string(b.n_rows()) + " rows");
  const index_t n = b.n_cols();
  DenseMatrix<T> c(a.n_rows(), n);
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    auto out = c.row(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      auto brow = b.row(cols[p]);
      const T v = vals[p];
      for (index_t j = 0; j < n; ++j) out[j] += v * brow[j];
    }
  }
  return c;
}

template <Scalar T>
DenseMatrix<T> dense_gemm_reference(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.n_cols() != b.n_rows()) throw std::invalid_argument("dense_gemm_reference: inner dimensions differ");
  DenseMatrix<T> c(a.n_rows(), b.n_cols());
  for (index_t i = 0; i < a.n_rows(); ++i)
    for (index_t j = 0; j < b.n_cols(); ++j) {
      T sum{0};
      for (index_t k = 0; k < a.n_cols(); ++k) sum += a(i, k) * b(k, j);
      c(i, j) = sum;
    }
  return c;
}

template class DenseMatrix<float>;
template class DenseMatrix<double>;
template class CsrMatrix<float>;
template class CsrMatrix<double>;

template DenseMatrix<float> dense_from_csr(const CsrMatrix<float>&, index_t);
template DenseMatrix<double> dense_from_csr(const CsrMatrix<double>&, index_t);
template CsrMatrix<float> transpose(const CsrMatrix<float>&);
template CsrMatrix<double> transpose(const CsrMatrix<double>&);
template DenseMatrix<float> csr_spmm_reference(const CsrMatrix<float>&, const DenseMatrix<float>&);
template DenseMatrix<double> csr_spmm_reference(const CsrMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<float> dense_gemm_reference(const DenseMatrix<float>&, const DenseMatrix<float>&);
template DenseMatrix<double> dense_gemm_reference(const DenseMatrix<double>&, const DenseMatrix<double>&);

}  // namespace bsmm
