#pragma once

#include <cstdint>
#include <vector>

#include "bsmm/csr.hpp"

namespace bsmm {

enum class ValueDist { ones, uniform };

struct BandSpec {
  index_t n = 0;
  index_t b = 0;  // half-bandwidth: a(i,j) != 0 iff |i - j| <= b
  std::uint64_t seed = 0;
  ValueDist values = ValueDist::uniform;
};

/// Exact structural nnz of a band matrix: sum over rows of the clipped band width.
index_t band_nnz(index_t n, index_t b);

/// Every in-band position is structural. Throws std::invalid_argument unless
/// 0 <= b <= n-1 (any b >= 0 is accepted for n == 0).
template <Scalar T>
CsrMatrix<T> gen_band(const BandSpec& spec);

enum class ShuffleMode {
  none,        // cluster 0 rows, then cluster 1 rows, ...
  interleave,  // row i belongs to cluster i mod k
  random,      // seeded Fisher-Yates shuffle
};

struct ClusterSpec {
  index_t k = 2;
  index_t rows_per_cluster = 64;
  double density = 0.1;  // prototype density over its column range
  index_t n_cols = 256;
  std::uint64_t seed = 0;
  /// Each prototype entry of a row is moved to a uniformly random column
  /// with this probability.
  double jitter = 0.0;
  ShuffleMode shuffle = ShuffleMode::random;
  /// Split the columns into k contiguous ranges, prototype c drawing only from range c.
  bool disjoint = false;
};

template <Scalar T>
struct ClusteredMatrix {
  CsrMatrix<T> matrix;
  std::vector<index_t> labels;  // prototype index of every row
};

template <Scalar T>
ClusteredMatrix<T> gen_clustered(const ClusterSpec& spec);

/// Each position is independently structural with probability `density`.
template <Scalar T>
CsrMatrix<T> gen_uniform_random(index_t n_rows, index_t n_cols, double density, std::uint64_t seed);

/// Dense matrix with entries uniform in (-1, 1).
template <Scalar T>
DenseMatrix<T> gen_dense(index_t n_rows, index_t n_cols, std::uint64_t seed);

}  // namespace bsmm
