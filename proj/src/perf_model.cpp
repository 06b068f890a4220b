#include "bsmm/perf_model.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bsmm/synth.hpp"

namespace bsmm {

PerfModel fit(const std::vector<Measurement>& ms) {
  if (ms.size() < 3) throw std::invalid_argument("fit: need at least 3 measurements, got " + std::to_string(ms.size()));
  std::set<index_t> distinct;
  for (const auto& m : ms) {
    if (m.n_e < 0) throw std::invalid_argument("fit: negative n_e");
    distinct.insert(m.n_e);
  }
  if (distinct.size() < 2) throw std::invalid_argument("fit: all measurements share one n_e");

  // Centered two-pass form.
  const double n = static_cast<double>(ms.size());
  double mx = 0.0, my = 0.0;
  for (const auto& m : ms) {
    mx += static_cast<double>(m.n_e);
    my += m.t_total;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& m : ms) {
    const double dx = static_cast<double>(m.n_e) - mx;
    const double dy = m.t_total - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  PerfModel model;
  model.n_points = ms.size();
  model.t_e = sxy / sxx;
  model.t_init = my - model.t_e * mx;
  if (model.t_e < 0.0) {
    model.t_e = 0.0;
    model.t_init = my;
    model.degenerate = true;
  }
  double ss_res = 0.0;
  for (const auto& m : ms) {
    const double r = m.t_total - predict(model, m.n_e);
    ss_res += r * r;
  }
  model.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return model;
}

TimingSummary summarize_timings(const std::vector<double>& seconds) {
  TimingSummary s;
  if (seconds.empty()) return s;
  for (double t : seconds) s.mean += t;
  s.mean /= static_cast<double>(seconds.size());
  double ss = 0.0;
  for (double t : seconds) ss += (t - s.mean) * (t - s.mean);
  if (s.mean > 0.0) s.cv = std::sqrt(ss / static_cast<double>(seconds.size())) / s.mean;
  return s;
}

std::string measurement_label(const SpmmOptions& opts, const BlockDims& dims, index_t n_dense_cols) {
  return std::string(opts.skip_empty ? "skip-on" : "skip-off") + "/" + to_string(dims) + "/N" +
         std::to_string(n_dense_cols);
}

template <Scalar T>
std::vector<Measurement> sweep_band(const SweepConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("sweep_band: repeats must be at least 1");
  using Clock = std::chrono::steady_clock;
  const DenseMatrix<T> b = gen_dense<T>(config.n, config.n_dense_cols, config.seed + 1);

  std::vector<Measurement> out;
  out.reserve(config.bandwidths.size());
  for (index_t bw : config.bandwidths) {
    const BcsrMatrix<T> ab = to_bcsr(gen_band<T>({config.n, bw, config.seed, ValueDist::uniform}), config.dims);
    SpmmCounters counters;
    (void)bcsr_spmm(ab, b, config.opts, &counters);  // warm-up
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(config.repeats));
    for (index_t r = 0; r < config.repeats; ++r) {
      const auto t0 = Clock::now();
      const DenseMatrix<T> c = bcsr_spmm(ab, b, config.opts);
      times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
      if (c.n_rows() != config.n) throw std::logic_error("sweep_band: unexpected result shape");
    }
    const TimingSummary ts = summarize_timings(times);
    Measurement m;
    m.n_e = ab.n_blocks();
    m.t_total = ts.mean;
    m.cv = ts.cv;
    m.label = measurement_label(config.opts, config.dims, config.n_dense_cols);
    m.tile_mma_calls = counters.tile_mma_calls;
    m.grid_blocks = ab.grid_blocks();
    m.bandwidth = bw;
    m.repeats = config.repeats;
    out.push_back(std::move(m));
  }
  return out;
}

void write_measurements_csv(std::ostream& out, const std::vector<Measurement>& ms) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "n_e,t_total_s,cv,label\n";
  for (const auto& m : ms) buf << m.n_e << ',' << m.t_total << ',' << m.cv << ',' << m.label << '\n';
  out << buf.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::vector<Measurement> read_measurements_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("measurement CSV is empty");
  const auto header = split_csv(line);
  int col_ne = -1, col_t = -1, col_cv = -1, col_label = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "n_e") col_ne = static_cast<int>(i);
    else if (header[i] == "t_total_s") col_t = static_cast<int>(i);
    else if (header[i] == "cv") col_cv = static_cast<int>(i);
    else if (header[i] == "label") col_label = static_cast<int>(i);
  }
  if (col_ne < 0 || col_t < 0) throw std::invalid_argument("measurement CSV needs n_e and t_total_s columns");

  std::vector<Measurement> ms;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    auto cell = [&](int col) -> const std::string& {
      if (col >= static_cast<int>(cells.size()))
        throw std::invalid_argument("measurement CSV line " + std::to_string(line_no) + ": missing column");
      return cells[static_cast<std::size_t>(col)];
    };
    Measurement m;
    const std::string& ne_text = cell(col_ne);
    const std::string& t_text = cell(col_t);
    const std::string* cv_text = col_cv >= 0 ? &cell(col_cv) : nullptr;
    try {
      m.n_e = std::stoll(ne_text);
      m.t_total = std::stod(t_text);
      if (cv_text && !cv_text->empty()) m.cv = std::stod(*cv_text);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("measurement CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (col_label >= 0) m.label = cell(col_label);
    if (m.n_e < 0 || !(m.t_total > 0.0))
      throw std::invalid_argument("measurement CSV line " + std::to_string(line_no) + ": need n_e >= 0, t_total_s > 0");
    ms.push_back(std::move(m));
  }
  return ms;
}

template std::vector<Measurement> sweep_band<float>(const SweepConfig&);
template std::vector<Measurement> sweep_band<double>(const SweepConfig&);

}  // namespace bsmm
