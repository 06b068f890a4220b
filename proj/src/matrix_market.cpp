#include "bsmm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace bsmm {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric };

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

template <typename N>
N parse_number(std::string_view tok, std::size_t line, const char* what) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  N value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(tok) + "'", line);
  return value;
}

template <Scalar T>
void append_value(std::string& out, T v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

template <Scalar T>
CsrMatrix<T> read_matrix_market(std::istream& in, const MatrixMarketOptions& opts) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty input, expected %%MatrixMarket header", 0);
  ++line_no;
  const auto header = split_ws(line);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket")
    throw ParseError("malformed header, expected '%%MatrixMarket matrix coordinate <field> <symmetry>'", line_no);
  if (lower(header[1]) != "matrix") throw ParseError("unsupported object '" + std::string(header[1]) + "'", line_no);
  if (lower(header[2]) != "coordinate")
    throw ParseError("unsupported format '" + std::string(header[2]) + "', only coordinate is read", line_no);

  Field field;
  const std::string f = lower(header[3]);
  if (f == "real") field = Field::real;
  else if (f == "integer") field = Field::integer;
  else if (f == "pattern") field = Field::pattern;
  else throw ParseError("unsupported field '" + f + "'", line_no);

  Symmetry sym;
  const std::string s = lower(header[4]);
  if (s == "general") sym = Symmetry::general;
  else if (s == "symmetric") sym = Symmetry::symmetric;
  else throw ParseError("unsupported symmetry '" + s + "'", line_no);

  // Skip comments to the size line.
  bool have_size = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line.front() == '%') continue;
    have_size = true;
    break;
  }
  if (!have_size) throw ParseError("missing size line", line_no);
  const auto size_tok = split_ws(line);
  if (size_tok.size() != 3) throw ParseError("size line must hold 'rows cols entries'", line_no);
  const auto n_rows = parse_number<index_t>(size_tok[0], line_no, "row count");
  const auto n_cols = parse_number<index_t>(size_tok[1], line_no, "column count");
  const auto declared = parse_number<index_t>(size_tok[2], line_no, "entry count");
  if (n_rows < 0 || n_cols < 0 || declared < 0) throw ParseError("negative size", line_no);
  if (sym == Symmetry::symmetric && n_rows != n_cols) throw ParseError("symmetric matrix must be square", line_no);

  const std::size_t expected_tokens = field == Field::pattern ? 2 : 3;
  std::vector<Triplet<T>> entries;
  entries.reserve(static_cast<std::size_t>(sym == Symmetry::symmetric ? 2 * declared : declared));

  index_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line.front() == '%') continue;
    if (seen == declared) throw ParseError("more entries than the declared " + std::to_string(declared), line_no);
    const auto tok = split_ws(line);
    if (tok.size() != expected_tokens)
      throw ParseError("expected " + std::to_string(expected_tokens) + " tokens per entry", line_no);
    const index_t r = parse_number<index_t>(tok[0], line_no, "row index") - 1;
    const index_t c = parse_number<index_t>(tok[1], line_no, "column index") - 1;
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols)
      throw ParseError("index (" + std::string(tok[0]) + ", " + std::string(tok[1]) + ") out of range", line_no);
    T v{1};
    if (field != Field::pattern) v = parse_number<T>(tok[2], line_no, "value");
    entries.push_back({r, c, v});
    if (sym == Symmetry::symmetric && r != c) entries.push_back({c, r, v});
    ++seen;
  }
  if (in.bad()) throw ParseError("read failure", line_no);
  if (seen != declared)
    throw ParseError("declared " + std::to_string(declared) + " entries but found " + std::to_string(seen), line_no);

  return CsrMatrix<T>::from_triplets(n_rows, n_cols, std::move(entries),
                                     opts.keep_explicit_zeros ? ZeroPolicy::keep : ZeroPolicy::drop);
}

template <Scalar T>
CsrMatrix<T> read_matrix_market(const std::filesystem::path& path, const MatrixMarketOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_market<T>(in, opts);
}

template <Scalar T>
void write_matrix_market(std::ostream& out, const CsrMatrix<T>& a) {
  std::string buf = "%%MatrixMarket matrix coordinate real general\n";
  buf += std::to_string(a.n_rows()) + " " + std::to_string(a.n_cols()) + " " + std::to_string(a.nnz()) + "\n";
  for (index_t i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      buf += std::to_string(i + 1);
      buf += ' ';
      buf += std::to_string(cols[p] + 1);
      buf += ' ';
      append_value(buf, vals[p]);
      buf += '\n';
    }
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw std::runtime_error("write_matrix_market: write failure");
}

template <Scalar T>
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix<T>& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  write_matrix_market(out, a);
}

template <Scalar T>
DenseMatrix<T> read_dense_text(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto tok = split_ws(text);
  if (tok.size() < 2) throw ParseError("dense text: missing 'rows cols' header", 1);
  const auto rows = parse_number<index_t>(tok[0], 1, "row count");
  const auto cols = parse_number<index_t>(tok[1], 1, "column count");
  if (rows < 0 || cols < 0) throw ParseError("dense text: negative size", 1);
  if (static_cast<index_t>(tok.size()) - 2 != rows * cols)
    throw ParseError("dense text: expected " + std::to_string(rows * cols) + " values, found " +
                         std::to_string(tok.size() - 2),
                     0);
  std::vector<T> data;
  data.reserve(tok.size() - 2);
  for (std::size_t i = 2; i < tok.size(); ++i) data.push_back(parse_number<T>(tok[i], 0, "value"));
  return DenseMatrix<T>(rows, cols, std::move(data));
}

template <Scalar T>
void write_dense_text(std::ostream& out, const DenseMatrix<T>& m) {
  std::string buf = std::to_string(m.n_rows()) + " " + std::to_string(m.n_cols()) + "\n";
  for (index_t i = 0; i < m.n_rows(); ++i) {
    auto row = m.row(i);
    for (index_t j = 0; j < m.n_cols(); ++j) {
      if (j) buf += ' ';
      append_value(buf, row[j]);
    }
    buf += '\n';
  }
  out << buf;
  if (!out) throw std::runtime_error("write_dense_text: write failure");
}

template CsrMatrix<float> read_matrix_market(std::istream&, const MatrixMarketOptions&);
template CsrMatrix<double> read_matrix_market(std::istream&, const MatrixMarketOptions&);
template CsrMatrix<float> read_matrix_market(const std::filesystem::path&, const MatrixMarketOptions&);
template CsrMatrix<double> read_matrix_market(const std::filesystem::path&, const MatrixMarketOptions&);
template void write_matrix_market(std::ostream&, const CsrMatrix<float>&);
template void write_matrix_market(std::ostream&, const CsrMatrix<double>&);
template void write_matrix_market(const std::filesystem::path&, const CsrMatrix<float>&);
template void write_matrix_market(const std::filesystem::path&, const CsrMatrix<double>&);
template DenseMatrix<float> read_dense_text(std::istream&);
template DenseMatrix<double> read_dense_text(std::istream&);
template void write_dense_text(std::ostream&, const DenseMatrix<float>&);
template void write_dense_text(std::ostream&, const DenseMatrix<double>&);

}  // namespace bsmm
