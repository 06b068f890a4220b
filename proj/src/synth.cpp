#include "bsmm/synth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "bsmm/rng.hpp"

namespace bsmm {

namespace {

// Generators refuse to allocate beyond this many structural entries.
constexpr index_t kMaxGeneratedNnz = index_t{1} << 31;

}  // namespace

index_t band_nnz(index_t n, index_t b) {
  index_t total = 0;
  for (index_t i = 0; i < n; ++i) total += std::min(i + b, n - 1) - std::max(i - b, index_t{0}) + 1;
  return total;
}

template <Scalar T>
CsrMatrix<T> gen_band(const BandSpec& spec) {
  const index_t n = spec.n, b = spec.b;
  if (n < 0 || b < 0 || (n > 0 && b > n - 1))
    throw std::invalid_argument("gen_band: half-bandwidth " + std::to_string(b) + " outside [0, " +
                                std::to_string(n - 1) + "]");
  const index_t nnz = band_nnz(n, b);
  if (nnz > kMaxGeneratedNnz) throw std::length_error("gen_band: " + std::to_string(nnz) + " entries is too large");

  Rng rng(spec.seed);
  std::vector<index_t> row_ptr(static_cast<std::size_t>(n + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  col_idx.reserve(static_cast<std::size_t>(nnz));
  values.reserve(static_cast<std::size_t>(nnz));
  for (index_t i = 0; i < n; ++i) {
    const index_t lo = std::max(i - b, index_t{0});
    const index_t hi = std::min(i + b, n - 1);
    for (index_t j = lo; j <= hi; ++j) {
      col_idx.push_back(j);
      values.push_back(spec.values == ValueDist::ones ? T{1} : static_cast<T>(rng.signed_nonzero()));
    }
    row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
  }
  return CsrMatrix<T>(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
ClusteredMatrix<T> gen_clustered(const ClusterSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("gen_clustered: k must be at least 1");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("gen_clustered: density must be in (0,1]");
  if (!(spec.jitter >= 0.0 && spec.jitter <= 1.0)) throw std::invalid_argument("gen_clustered: jitter must be in [0,1]");
  if (spec.rows_per_cluster < 0 || spec.n_cols < 1) throw std::invalid_argument("gen_clustered: invalid shape");
  if (spec.disjoint && spec.n_cols < spec.k)
    throw std::invalid_argument("gen_clustered: disjoint prototypes need at least k columns");

  const Rng root(spec.seed);
  Rng proto_rng = root.split(1);
  Rng shuffle_rng = root.split(2);
  Rng row_rng = root.split(3);

  std::vector<std::vector<index_t>> prototypes(static_cast<std::size_t>(spec.k));
  for (index_t c = 0; c < spec.k; ++c) {
    const index_t lo = spec.disjoint ? c * spec.n_cols / spec.k : 0;
    const index_t hi = spec.disjoint ? (c + 1) * spec.n_cols / spec.k : spec.n_cols;
    auto& proto = prototypes[c];
    for (index_t j = lo; j < hi; ++j)
      if (proto_rng.uniform() < spec.density) proto.push_back(j);
    if (proto.empty()) proto.push_back(lo + static_cast<index_t>(proto_rng.below(static_cast<std::uint64_t>(hi - lo))));
  }

  const index_t n_rows = spec.k * spec.rows_per_cluster;
  std::vector<index_t> labels(static_cast<std::size_t>(n_rows));
  for (index_t r = 0; r < n_rows; ++r)
    labels[r] = spec.shuffle == ShuffleMode::interleave ? r % spec.k : r / std::max<index_t>(spec.rows_per_cluster, 1);
  if (spec.shuffle == ShuffleMode::random)
    for (index_t r = n_rows - 1; r > 0; --r)
      std::swap(labels[r], labels[static_cast<index_t>(shuffle_rng.below(static_cast<std::uint64_t>(r + 1)))]);

  std::vector<index_t> row_ptr(static_cast<std::size_t>(n_rows + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  std::vector<index_t> cols;
  for (index_t r = 0; r < n_rows; ++r) {
    cols.clear();
    for (index_t j : prototypes[labels[r]]) {
      if (spec.jitter > 0.0 && row_rng.uniform() < spec.jitter)
        cols.push_back(static_cast<index_t>(row_rng.below(static_cast<std::uint64_t>(spec.n_cols))));
      else
        cols.push_back(j);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (index_t j : cols) {
      col_idx.push_back(j);
      values.push_back(static_cast<T>(row_rng.signed_nonzero()));
    }
    row_ptr[r + 1] = static_cast<index_t>(col_idx.size());
  }
  return {CsrMatrix<T>(n_rows, spec.n_cols, std::move(row_ptr), std::move(col_idx), std::move(values)),
          std::move(labels)};
}

template <Scalar T>
CsrMatrix<T> gen_uniform_random(index_t n_rows, index_t n_cols, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("gen_uniform_random: density must be in [0,1]");
  if (n_rows < 0 || n_cols < 0) throw std::invalid_argument("gen_uniform_random: negative dimension");
  Rng rng(seed);
  std::vector<index_t> row_ptr(static_cast<std::size_t>(n_rows + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  for (index_t i = 0; i < n_rows; ++i) {
    for (index_t j = 0; j < n_cols; ++j) {
      if (rng.uniform() < density) {
        col_idx.push_back(j);
        values.push_back(static_cast<T>(rng.signed_nonzero()));
      }
    }
    row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
  }
  return CsrMatrix<T>(n_rows, n_cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
DenseMatrix<T> gen_dense(index_t n_rows, index_t n_cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix<T> m(n_rows, n_cols);
  for (auto& v : m.data()) v = static_cast<T>(rng.signed_nonzero());
  return m;
}

#define BSMM_INSTANTIATE(T)                                                                     \
  template CsrMatrix<T> gen_band(const BandSpec&);                                              \
  template ClusteredMatrix<T> gen_clustered(const ClusterSpec&);                                \
  template CsrMatrix<T> gen_uniform_random(index_t, index_t, double, std::uint64_t);            \
  template DenseMatrix<T> gen_dense(index_t, index_t, std::uint64_t);

BSMM_INSTANTIATE(float)
BSMM_INSTANTIATE(double)

#undef BSMM_INSTANTIATE

}  // namespace bsmm
