#include "bsmm/reorder.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace bsmm {

Permutation::Permutation(std::vector<index_t> map) : map_(std::move(map)) {
  std::vector<char> seen(map_.size(), 0);
  for (index_t v : map_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("Permutation: not a bijection on [0, " + std::to_string(size()) + ")");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(index_t n) {
  std::vector<index_t> map(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) map[i] = i;
  return Permutation(std::move(map));
}

bool Permutation::is_identity() const {
  for (index_t i = 0; i < size(); ++i)
    if (map_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<index_t> inv(map_.size());
  for (index_t i = 0; i < size(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

void write_permutation(std::ostream& out, const Permutation& p) {
  std::string buf;
  for (index_t v : p.map()) {
    buf += std::to_string(v);
    buf += '\n';
  }
  out << buf;
  if (!out) throw std::runtime_error("write_permutation: write failure");
}

Permutation read_permutation(std::istream& in) {
  std::vector<index_t> map;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(line, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("read_permutation: bad index '" + line + "'");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw std::invalid_argument("read_permutation: bad index '" + line + "'");
    map.push_back(v);
  }
  return Permutation(std::move(map));
}

template <Scalar T>
RowPattern row_pattern(const CsrMatrix<T>& a, index_t row, index_t w) {
  RowPattern p;
  for (index_t c : a.row_cols(row)) {
    const index_t bc = c / w;
    if (p.empty() || p.back() != bc) p.push_back(bc);
  }
  return p;
}

double jaccard_distance(std::span<const index_t> a, std::span<const index_t> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      ++common;
      ++i;
      ++j;
    }
  }
  const double uni = static_cast<double>(a.size() + b.size() - common);
  return 1.0 - static_cast<double>(common) / uni;
}

template <Scalar T>
RowClusters find_row_clusters(const CsrMatrix<T>& a, BlockDims dims, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("cluster_rows: tau must be in [0,1]");
  const index_t n = a.n_rows();
  const index_t nbc = ceil_div(a.n_cols(), dims.w);

  std::vector<RowPattern> patterns(static_cast<std::size_t>(n));
  std::vector<std::vector<index_t>> posting(static_cast<std::size_t>(nbc));
  for (index_t r = 0; r < n; ++r) {
    patterns[r] = row_pattern(a, r, dims.w);
    for (index_t bc : patterns[r]) posting[bc].push_back(r);
  }

  std::vector<index_t> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<index_t> starts;
  std::vector<char> clustered(static_cast<std::size_t>(n), 0);
  // Stamps are cluster ids, so nothing needs clearing between clusters.
  std::vector<index_t> in_rep(static_cast<std::size_t>(nbc), -1);
  std::vector<index_t> queued(static_cast<std::size_t>(n), -1);
  std::priority_queue<index_t, std::vector<index_t>, std::greater<>> candidates;

  index_t cluster = 0;
  for (index_t seed = 0; seed < n; ++seed) {
    if (clustered[seed] || patterns[seed].empty()) continue;

    index_t position = seed;
    index_t rep_size = 0;
    auto merge = [&](index_t r) {
      clustered[r] = 1;
      order.push_back(r);
      for (index_t bc : patterns[r]) {
        if (in_rep[bc] == cluster) continue;
        in_rep[bc] = cluster;
        ++rep_size;
        auto& list = posting[bc];
        std::size_t keep = 0;
        for (index_t w : list) {
          if (clustered[w]) continue;
          list[keep++] = w;
          if (w > position && queued[w] != cluster) {
            queued[w] = cluster;
            candidates.push(w);
          }
        }
        list.resize(keep);
      }
    };

    starts.push_back(static_cast<index_t>(order.size()));
    merge(seed);
    while (!candidates.empty()) {
      const index_t w = candidates.top();
      candidates.pop();
      position = w;
      const auto& pw = patterns[w];
      index_t common = 0;
      for (index_t bc : pw) common += in_rep[bc] == cluster;
      const double uni = static_cast<double>(rep_size + static_cast<index_t>(pw.size()) - common);
      const double dist = 1.0 - static_cast<double>(common) / uni;
      if (dist < tau) merge(w);
    }
    ++cluster;
  }

  if (static_cast<index_t>(order.size()) < n) starts.push_back(static_cast<index_t>(order.size()));
  for (index_t r = 0; r < n; ++r)
    if (patterns[r].empty()) order.push_back(r);
  return {Permutation(std::move(order)), std::move(starts)};
}

template <Scalar T>
Permutation cluster_rows(const CsrMatrix<T>& a, BlockDims dims, double tau) {
  return find_row_clusters(a, dims, tau).order;
}

template <Scalar T>
CsrMatrix<T> apply_row_permutation(const CsrMatrix<T>& a, const Permutation& p) {
  if (p.size() != a.n_rows())
    throw std::invalid_argument("apply_row_permutation: permutation has " + std::to_string(p.size()) +
                                " entries for " + std::to_string(a.n_rows()) + " rows");
  std::vector<index_t> row_ptr(static_cast<std::size_t>(a.n_rows() + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  col_idx.reserve(static_cast<std::size_t>(a.nnz()));
  values.reserve(static_cast<std::size_t>(a.nnz()));
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(p[i]);
    auto vals = a.row_values(p[i]);
    col_idx.insert(col_idx.end(), cols.begin(), cols.end());
    values.insert(values.end(), vals.begin(), vals.end());
    row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
  }
  return CsrMatrix<T>(a.n_rows(), a.n_cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
CsrMatrix<T> apply_column_permutation(const CsrMatrix<T>& a, const Permutation& p) {
  if (p.size() != a.n_cols())
    throw std::invalid_argument("apply_column_permutation: permutation has " + std::to_string(p.size()) +
                                " entries for " + std::to_string(a.n_cols()) + " columns");
  const Permutation inv = p.inverse();
  std::vector<index_t> row_ptr(a.row_ptr().begin(), a.row_ptr().end());
  std::vector<index_t> col_idx(static_cast<std::size_t>(a.nnz()));
  std::vector<T> values(static_cast<std::size_t>(a.nnz()));
  std::vector<std::pair<index_t, T>> row;
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    row.clear();
    for (std::size_t q = 0; q < cols.size(); ++q) row.emplace_back(inv[cols[q]], vals[q]);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t q = 0; q < row.size(); ++q) {
      col_idx[row_ptr[i] + static_cast<index_t>(q)] = row[q].first;
      values[row_ptr[i] + static_cast<index_t>(q)] = row[q].second;
    }
  }
  return CsrMatrix<T>(a.n_rows(), a.n_cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
DenseMatrix<T> permute_rows(const DenseMatrix<T>& m, const Permutation& p) {
  if (p.size() != m.n_rows()) throw std::invalid_argument("permute_rows: length mismatch");
  DenseMatrix<T> out(m.n_rows(), m.n_cols());
  for (index_t i = 0; i < m.n_rows(); ++i) std::ranges::copy(m.row(p[i]), out.row(i).begin());
  return out;
}

template <Scalar T>
DenseMatrix<T> unpermute_rows(const DenseMatrix<T>& m, const Permutation& p) {
  if (p.size() != m.n_rows()) throw std::invalid_argument("unpermute_rows: length mismatch");
  DenseMatrix<T> out(m.n_rows(), m.n_cols());
  for (index_t i = 0; i < m.n_rows(); ++i) std::ranges::copy(m.row(i), out.row(p[i]).begin());
  return out;
}

ReorderMode parse_reorder_mode(const std::string& text) {
  if (text == "rows") return ReorderMode::rows;
  if (text == "rows-cols" || text == "rows+cols") return ReorderMode::rows_cols;
  throw std::invalid_argument("reorder mode must be 'rows' or 'rows-cols', got '" + text + "'");
}

std::string to_string(ReorderMode mode) { return mode == ReorderMode::rows ? "rows" : "rows-cols"; }

template <Scalar T>
ReorderReport evaluate_reordering(const CsrMatrix<T>& a, BlockDims dims, double tau, ReorderMode mode,
                                  bool keep_best) {
  ReorderReport report;
  report.tau = tau;
  report.mode = mode;
  report.keep_best = keep_best;
  report.before = block_stats_from_counts(blocks_per_block_row(a, dims), a.nnz(), dims);

  report.rows = cluster_rows(a, dims, tau);
  CsrMatrix<T> permuted = apply_row_permutation(a, report.rows);
  if (mode == ReorderMode::rows_cols) {
    // Column patterns are quantized by the block height of the transpose view.
    report.cols = cluster_rows(transpose(permuted), BlockDims(dims.w, dims.h), tau);
    permuted = apply_column_permutation(permuted, *report.cols);
  }
  report.after = block_stats_from_counts(blocks_per_block_row(permuted, dims), permuted.nnz(), dims);

  if (keep_best && report.after.n_e >= report.before.n_e) {
    report.applied = false;
    report.rows = Permutation::identity(a.n_rows());
    if (report.cols) report.cols = Permutation::identity(a.n_cols());
    report.after = report.before;
  }
  return report;
}

template <Scalar T>
CsrMatrix<T> apply_reordering(const CsrMatrix<T>& a, const ReorderReport& report) {
  CsrMatrix<T> out = apply_row_permutation(a, report.rows);
  if (report.cols) out = apply_column_permutation(out, *report.cols);
  return out;
}

#define BSMM_INSTANTIATE(T)                                                                              \
  template RowPattern row_pattern(const CsrMatrix<T>&, index_t, index_t);                                \
  template RowClusters find_row_clusters(const CsrMatrix<T>&, BlockDims, double);                        \
  template Permutation cluster_rows(const CsrMatrix<T>&, BlockDims, double);                             \
  template CsrMatrix<T> apply_row_permutation(const CsrMatrix<T>&, const Permutation&);                  \
  template CsrMatrix<T> apply_column_permutation(const CsrMatrix<T>&, const Permutation&);               \
  template DenseMatrix<T> permute_rows(const DenseMatrix<T>&, const Permutation&);                       \
  template DenseMatrix<T> unpermute_rows(const DenseMatrix<T>&, const Permutation&);                     \
  template ReorderReport evaluate_reordering(const CsrMatrix<T>&, BlockDims, double, ReorderMode, bool); \
  template CsrMatrix<T> apply_reordering(const CsrMatrix<T>&, const ReorderReport&);

BSMM_INSTANTIATE(float)
BSMM_INSTANTIATE(double)

#undef BSMM_INSTANTIATE

}  // namespace bsmm
