#include "bsmm/blocking.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bsmm {

BlockDims::BlockDims(index_t h_, index_t w_) : h(h_), w(w_) {
  if (h < 1 || w < 1) throw std::invalid_argument("block dims must be at least 1x1");
}

BlockDims parse_block_dims(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos || x == 0 || x + 1 == text.size())
    throw std::invalid_argument("block dims must look like HxW, got '" + text + "'");
  std::size_t used_h = 0, used_w = 0;
  long long h = 0, w = 0;
  try {
    h = std::stoll(text.substr(0, x), &used_h);
    w = std::stoll(text.substr(x + 1), &used_w);
  } catch (const std::exception&) {
    throw std::invalid_argument("block dims must look like HxW, got '" + text + "'");
  }
  if (used_h != x || used_w != text.size() - x - 1)
    throw std::invalid_argument("block dims must look like HxW, got '" + text + "'");
  return BlockDims(h, w);
}

std::string to_string(const BlockDims& dims) { return std::to_string(dims.h) + "x" + std::to_string(dims.w); }

template <Scalar T>
BcsrMatrix<T>::BcsrMatrix(index_t n_rows, index_t n_cols, BlockDims dims, std::vector<index_t> block_row_ptr,
                          std::vector<index_t> block_col_idx, std::vector<T> block_values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      dims_(dims),
      block_row_ptr_(std::move(block_row_ptr)),
      block_col_idx_(std::move(block_col_idx)),
      block_values_(std::move(block_values)) {
  if (n_rows_ < 0 || n_cols_ < 0) throw std::invalid_argument("BcsrMatrix: negative dimension");
  if (dims_.h < 1 || dims_.w < 1) throw std::invalid_argument("BcsrMatrix: invalid block dims");
  const index_t nbr = n_block_rows();
  const index_t nbc = n_block_cols();
  if (static_cast<index_t>(block_row_ptr_.size()) != nbr + 1)
    throw std::invalid_argument("BcsrMatrix: block_row_ptr must have n_block_rows+1 entries");
  if (block_row_ptr_.front() != 0 || block_row_ptr_.back() != n_blocks())
    throw std::invalid_argument("BcsrMatrix: block_row_ptr must run from 0 to n_e");
  if (static_cast<index_t>(block_values_.size()) != n_blocks() * dims_.area())
    throw std::invalid_argument("BcsrMatrix: block_values must hold n_e*h*w scalars");
  for (index_t br = 0; br < nbr; ++br) {
    if (block_row_ptr_[br + 1] < block_row_ptr_[br])
      throw std::invalid_argument("BcsrMatrix: block_row_ptr decreasing");
    for (index_t p = block_row_ptr_[br]; p < block_row_ptr_[br + 1]; ++p) {
      if (block_col_idx_[p] < 0 || block_col_idx_[p] >= nbc)
        throw std::invalid_argument("BcsrMatrix: block column out of range");
      if (p > block_row_ptr_[br] && block_col_idx_[p - 1] >= block_col_idx_[p])
        throw std::invalid_argument("BcsrMatrix: block columns not strictly increasing");
    }
  }
}

namespace {

// Sorted distinct block columns touched by rows [r0, r1). `mark` has one slot
// per block column and is left all-false on return.
template <Scalar T>
void collect_block_cols(const CsrMatrix<T>& a, index_t r0, index_t r1, index_t w, std::vector<char>& mark,
                        std::vector<index_t>& out) {
  out.clear();
  for (index_t i = r0; i < r1; ++i)
    for (index_t c : a.row_cols(i)) {
      const index_t bc = c / w;
      if (!mark[bc]) {
        mark[bc] = 1;
        out.push_back(bc);
      }
    }
  std::sort(out.begin(), out.end());
  for (index_t bc : out) mark[bc] = 0;
}

}  // namespace

template <Scalar T>
BcsrMatrix<T> to_bcsr(const CsrMatrix<T>& a, BlockDims dims) {
  const index_t h = dims.h, w = dims.w;
  const index_t nbr = ceil_div(a.n_rows(), h);
  const index_t nbc = ceil_div(a.n_cols(), w);

  std::vector<std::vector<index_t>> cols_per_row(static_cast<std::size_t>(nbr));
#pragma omp parallel
  {
    std::vector<char> mark(static_cast<std::size_t>(nbc), 0);
#pragma omp for schedule(dynamic, 16)
    for (index_t br = 0; br < nbr; ++br)
      collect_block_cols(a, br * h, std::min((br + 1) * h, a.n_rows()), w, mark, cols_per_row[br]);
  }

  std::vector<index_t> block_row_ptr(static_cast<std::size_t>(nbr + 1), 0);
  for (index_t br = 0; br < nbr; ++br)
    block_row_ptr[br + 1] = block_row_ptr[br] + static_cast<index_t>(cols_per_row[br].size());
  const index_t n_e = block_row_ptr[nbr];

  std::vector<index_t> block_col_idx(static_cast<std::size_t>(n_e));
  std::vector<T> block_values(static_cast<std::size_t>(n_e * dims.area()), T{0});

#pragma omp parallel for schedule(dynamic, 16)
  for (index_t br = 0; br < nbr; ++br) {
    const auto& cols = cols_per_row[br];
    const index_t base = block_row_ptr[br];
    std::copy(cols.begin(), cols.end(), block_col_idx.begin() + base);
    const index_t r1 = std::min((br + 1) * h, a.n_rows());
    for (index_t i = br * h; i < r1; ++i) {
      auto rc = a.row_cols(i);
      auto rv = a.row_values(i);
      // Row columns ascend, so the block cursor only moves forward.
      std::size_t cursor = 0;
      for (std::size_t p = 0; p < rc.size(); ++p) {
        const index_t bc = rc[p] / w;
        while (cols[cursor] != bc) ++cursor;
        const index_t b = base + static_cast<index_t>(cursor);
        block_values[b * dims.area() + (i - br * h) * w + (rc[p] - bc * w)] = rv[p];
      }
    }
    std::vector<index_t>().swap(cols_per_row[br]);
  }

  return BcsrMatrix<T>(a.n_rows(), a.n_cols(), dims, std::move(block_row_ptr), std::move(block_col_idx),
                       std::move(block_values));
}

template <Scalar T>
CsrMatrix<T> from_bcsr(const BcsrMatrix<T>& ab) {
  const index_t h = ab.dims().h, w = ab.dims().w;
  std::vector<index_t> row_ptr(static_cast<std::size_t>(ab.n_rows() + 1), 0);
  std::vector<index_t> col_idx;
  std::vector<T> values;
  auto brp = ab.block_row_ptr();
  auto bci = ab.block_col_idx();
  for (index_t br = 0; br < ab.n_block_rows(); ++br) {
    const index_t r1 = std::min((br + 1) * h, ab.n_rows());
    for (index_t i = br * h; i < r1; ++i) {
      const index_t li = i - br * h;
      for (index_t b = brp[br]; b < brp[br + 1]; ++b) {
        auto blk = ab.block(b);
        const index_t c0 = bci[b] * w;
        for (index_t lj = 0; lj < w && c0 + lj < ab.n_cols(); ++lj) {
          const T v = blk[li * w + lj];
          if (v != T{0}) {
            col_idx.push_back(c0 + lj);
            values.push_back(v);
          }
        }
      }
      row_ptr[i + 1] = static_cast<index_t>(values.size());
    }
  }
  return CsrMatrix<T>(ab.n_rows(), ab.n_cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
std::vector<index_t> blocks_per_block_row(const CsrMatrix<T>& a, BlockDims dims) {
  const index_t nbr = ceil_div(a.n_rows(), dims.h);
  std::vector<index_t> counts(static_cast<std::size_t>(nbr));
#pragma omp parallel
  {
    std::vector<char> mark(static_cast<std::size_t>(ceil_div(a.n_cols(), dims.w)), 0);
    std::vector<index_t> cols;
#pragma omp for schedule(dynamic, 16)
    for (index_t br = 0; br < nbr; ++br) {
      collect_block_cols(a, br * dims.h, std::min((br + 1) * dims.h, a.n_rows()), dims.w, mark, cols);
      counts[br] = static_cast<index_t>(cols.size());
    }
  }
  return counts;
}

template <Scalar T>
index_t count_blocks(const CsrMatrix<T>& a, BlockDims dims) {
  index_t total = 0;
  for (index_t c : blocks_per_block_row(a, dims)) total += c;
  return total;
}

BlockCountBounds block_count_bounds(index_t nnz, index_t n_rows, index_t n_cols, BlockDims dims) {
  if (nnz < 0 || n_rows < 0 || n_cols < 0) throw std::invalid_argument("block_count_bounds: negative argument");
  const bool fits = n_cols == 0 ? nnz == 0 : n_rows > std::numeric_limits<index_t>::max() / n_cols || nnz <= n_rows * n_cols;
  if (!fits) throw std::invalid_argument("block_count_bounds: nnz exceeds n_rows*n_cols");
  const index_t grid = ceil_div(n_rows, dims.h) * ceil_div(n_cols, dims.w);
  return {ceil_div(nnz, dims.area()), std::min(grid, nnz)};
}

BlockStats block_stats_from_counts(std::vector<index_t> blocks_per_row, index_t nnz, BlockDims dims) {
  BlockStats s;
  s.dims = dims;
  s.nnz = nnz;
  s.blocks_per_row = std::move(blocks_per_row);
  for (index_t c : s.blocks_per_row) s.n_e += c;
  if (!s.blocks_per_row.empty()) {
    const double n = static_cast<double>(s.blocks_per_row.size());
    s.mean = static_cast<double>(s.n_e) / n;
    double ss = 0.0;
    for (index_t c : s.blocks_per_row) {
      const double d = static_cast<double>(c) - s.mean;
      ss += d * d;
    }
    s.std = std::sqrt(ss / n);
  }
  if (s.n_e > 0) {
    const double stored = static_cast<double>(s.n_e) * static_cast<double>(dims.area());
    s.density = static_cast<double>(nnz) / stored;
    s.padding_ratio = 1.0 - s.density;
  }
  return s;
}

template <Scalar T>
BlockStats block_stats(const BcsrMatrix<T>& ab, index_t nnz) {
  std::vector<index_t> counts(static_cast<std::size_t>(ab.n_block_rows()));
  auto ptr = ab.block_row_ptr();
  for (index_t br = 0; br < ab.n_block_rows(); ++br) counts[br] = ptr[br + 1] - ptr[br];
  return block_stats_from_counts(std::move(counts), nnz, ab.dims());
}

// ---- binary dump ----

static_assert(std::endian::native == std::endian::little, "binary BCSR dump assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'B', 'S', 'M', 'M', 'B', 'C', 'S', 'R'};

template <typename V>
void put(std::ostream& out, const V& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename V>
void put_array(std::ostream& out, std::span<const V> v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

template <typename V>
V get(std::istream& in) {
  V v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("read_bcsr: truncated header");
  return v;
}

template <typename V>
std::vector<V> get_array(std::istream& in, std::uint64_t n) {
  std::vector<V> v(static_cast<std::size_t>(n));
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(V))))
    throw std::runtime_error("read_bcsr: truncated payload");
  return v;
}

}  // namespace

template <Scalar T>
void write_bcsr(std::ostream& out, const BcsrMatrix<T>& ab) {
  out.write(kMagic, sizeof kMagic);
  put(out, kBcsrFormatVersion);
  put(out, static_cast<std::uint32_t>(sizeof(T)));
  put(out, static_cast<std::uint64_t>(ab.n_rows()));
  put(out, static_cast<std::uint64_t>(ab.n_cols()));
  put(out, static_cast<std::uint64_t>(ab.dims().h));
  put(out, static_cast<std::uint64_t>(ab.dims().w));
  put(out, static_cast<std::uint64_t>(ab.n_blocks()));
  put_array(out, ab.block_row_ptr());
  put_array(out, ab.block_col_idx());
  put_array(out, ab.block_values());
  if (!out) throw std::runtime_error("write_bcsr: write failure");
}

template <Scalar T>
void write_bcsr(const std::filesystem::path& path, const BcsrMatrix<T>& ab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  write_bcsr(out, ab);
}

template <Scalar T>
BcsrMatrix<T> read_bcsr(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("read_bcsr: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kBcsrFormatVersion) throw std::runtime_error("read_bcsr: unsupported version " + std::to_string(version));
  const auto scalar_bytes = get<std::uint32_t>(in);
  if (scalar_bytes != sizeof(T))
    throw std::runtime_error("read_bcsr: file holds " + std::to_string(scalar_bytes) + "-byte scalars, expected " +
                             std::to_string(sizeof(T)));
  const auto n_rows = static_cast<index_t>(get<std::uint64_t>(in));
  const auto n_cols = static_cast<index_t>(get<std::uint64_t>(in));
  const auto h = static_cast<index_t>(get<std::uint64_t>(in));
  const auto w = static_cast<index_t>(get<std::uint64_t>(in));
  const auto n_e = static_cast<index_t>(get<std::uint64_t>(in));
  const BlockDims dims(h, w);
  auto row_ptr = get_array<index_t>(in, static_cast<std::uint64_t>(ceil_div(n_rows, h) + 1));
  auto col_idx = get_array<index_t>(in, static_cast<std::uint64_t>(n_e));
  auto values = get_array<T>(in, static_cast<std::uint64_t>(n_e * dims.area()));
  return BcsrMatrix<T>(n_rows, n_cols, dims, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <Scalar T>
BcsrMatrix<T> read_bcsr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_bcsr<T>(in);
}

#define BSMM_INSTANTIATE(T)                                                   \
  template class BcsrMatrix<T>;                                               \
  template BcsrMatrix<T> to_bcsr(const CsrMatrix<T>&, BlockDims);             \
  template CsrMatrix<T> from_bcsr(const BcsrMatrix<T>&);                      \
  template index_t count_blocks(const CsrMatrix<T>&, BlockDims);              \
  template std::vector<index_t> blocks_per_block_row(const CsrMatrix<T>&, BlockDims); \
  template BlockStats block_stats(const BcsrMatrix<T>&, index_t);             \
  template void write_bcsr(std::ostream&, const BcsrMatrix<T>&);              \
  template void write_bcsr(const std::filesystem::path&, const BcsrMatrix<T>&); \
  template BcsrMatrix<T> read_bcsr(std::istream&);                            \
  template BcsrMatrix<T> read_bcsr(const std::filesystem::path&);

BSMM_INSTANTIATE(float)
BSMM_INSTANTIATE(double)

#undef BSMM_INSTANTIATE

}  // namespace bsmm
