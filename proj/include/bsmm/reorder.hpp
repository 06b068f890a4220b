#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsmm/blocking.hpp"
#include "bsmm/csr.hpp"

namespace bsmm {

/// Bijection on [0, n). Output position i holds input index map()[i].
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument if `map` is not a bijection.
  explicit Permutation(std::vector<index_t> map);

  static Permutation identity(index_t n);

  index_t size() const { return static_cast<index_t>(map_.size()); }
  std::span<const index_t> map() const { return map_; }
  index_t operator[](index_t i) const { return map_[static_cast<std::size_t>(i)]; }

  bool is_identity() const;
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<index_t> map_;
};

/// Newline-delimited decimal indices.
void write_permutation(std::ostream& out, const Permutation& p);
Permutation read_permutation(std::istream& in);

/// Sorted block-column indices touched by one row (columns quantized by w).
using RowPattern = std::vector<index_t>;

template <Scalar T>
RowPattern row_pattern(const CsrMatrix<T>& a, index_t row, index_t w);

/// 1 - |a ∩ b| / |a ∪ b| on sorted index sets; two empty sets are at distance 0.
double jaccard_distance(std::span<const index_t> a, std::span<const index_t> b);

/// Greedy similarity clustering of rows.
///
/// Repeatedly seeds a cluster with the lowest-index unclustered row, then
/// scans the remaining unclustered rows in ascending index order, merging
/// each row whose Jaccard distance to the cluster's running pattern union is
/// strictly below `tau`. Patterns are block-column sets for block width
/// `dims.w`. Empty rows form one trailing cluster. The permutation lists
/// clusters in creation order, rows within a cluster in ascending order.
///
/// Rows sharing no block column with the representative sit at distance 1
/// and can never merge (tau <= 1), so the scan only visits rows reachable
/// through the representative's block columns. This yields exactly the
/// merges of a full linear scan.
template <Scalar T>
Permutation cluster_rows(const CsrMatrix<T>& a, BlockDims dims, double tau);

struct RowClusters {
  Permutation order;
  /// Offset into `order` where each cluster begins, in creation order. The
  /// trailing empty-row cluster, if any, is the last one.
  std::vector<index_t> starts;

  index_t count() const { return static_cast<index_t>(starts.size()); }
};

/// cluster_rows plus the cluster boundaries.
template <Scalar T>
RowClusters find_row_clusters(const CsrMatrix<T>& a, BlockDims dims, double tau);

/// Row i of the result is row p[i] of `a`.
template <Scalar T>
CsrMatrix<T> apply_row_permutation(const CsrMatrix<T>& a, const Permutation& p);

/// Column j of the result is column p[j] of `a`.
template <Scalar T>
CsrMatrix<T> apply_column_permutation(const CsrMatrix<T>& a, const Permutation& p);

/// Row i of the result is row p[i] of `m`.
template <Scalar T>
DenseMatrix<T> permute_rows(const DenseMatrix<T>& m, const Permutation& p);

/// Inverse of permute_rows: row p[i] of the result is row i of `m`.
template <Scalar T>
DenseMatrix<T> unpermute_rows(const DenseMatrix<T>& m, const Permutation& p);

enum class ReorderMode { rows, rows_cols };

ReorderMode parse_reorder_mode(const std::string& text);
std::string to_string(ReorderMode mode);

struct ReorderReport {
  BlockStats before;
  BlockStats after;
  Permutation rows;
  std::optional<Permutation> cols;  // present in rows_cols mode
  double tau = 0.0;
  ReorderMode mode = ReorderMode::rows;
  bool keep_best = true;
  /// False when keep_best rejected the permutation and identity was kept.
  bool applied = true;

  double reduction_ratio() const {
    return after.n_e == 0 ? 1.0 : static_cast<double>(before.n_e) / static_cast<double>(after.n_e);
  }
};

/// Clusters rows (and, in rows_cols mode, columns of the row-permuted
/// matrix), then compares block statistics before and after. With
/// `keep_best`, a permutation that does not lower n_e is replaced by the
/// identity and `after` equals `before`.
template <Scalar T>
ReorderReport evaluate_reordering(const CsrMatrix<T>& a, BlockDims dims, double tau, ReorderMode mode,
                                  bool keep_best = true);

/// Applies the permutations of a report to `a`.
template <Scalar T>
CsrMatrix<T> apply_reordering(const CsrMatrix<T>& a, const ReorderReport& report);

}  // namespace bsmm
