#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bsmm/spmm.hpp"

namespace bsmm {

struct Measurement {
  index_t n_e = 0;
  double t_total = 0.0;  // seconds, mean over repeats
  double cv = 0.0;       // coefficient of variation of the repeats
  std::string label;
  // Not part of the measurement CSV; filled by sweeps.
  index_t tile_mma_calls = 0;
  index_t grid_blocks = 0;
  index_t bandwidth = 0;
  index_t repeats = 0;
};

/// T_total = t_e * n_e + t_init.
struct PerfModel {
  double t_e = 0.0;
  double t_init = 0.0;
  double r2 = 0.0;
  /// Set when the least-squares slope came out negative and was clamped to 0.
  bool degenerate = false;
  std::size_t n_points = 0;
};

/// Ordinary least squares of t_total on n_e. Needs at least 3 measurements
/// with 2 distinct n_e (std::invalid_argument otherwise). A negative slope
/// is clamped to 0, the intercept refitted as the mean, and the fit flagged.
PerfModel fit(const std::vector<Measurement>& ms);

inline double predict(const PerfModel& m, index_t n_e) { return m.t_e * static_cast<double>(n_e) + m.t_init; }

struct TimingSummary {
  double mean = 0.0;
  double cv = 0.0;
};

/// Arithmetic mean and population coefficient of variation.
TimingSummary summarize_timings(const std::vector<double>& seconds);

struct SweepConfig {
  index_t n = 4096;
  std::vector<index_t> bandwidths{16, 32, 64, 128};
  index_t n_dense_cols = 8;
  BlockDims dims;
  SpmmOptions opts;
  index_t repeats = 10;
  std::uint64_t seed = 1;
};

/// One measurement per bandwidth: band matrix, BCSR conversion, one untimed
/// warm-up, then `repeats` timed kernel runs. Conversion is not timed.
template <Scalar T>
std::vector<Measurement> sweep_band(const SweepConfig& config);

std::string measurement_label(const SpmmOptions& opts, const BlockDims& dims, index_t n_dense_cols);

// CSV columns: n_e,t_total_s,cv,label. Readers locate columns by header name
// and ignore extra columns.
void write_measurements_csv(std::ostream& out, const std::vector<Measurement>& ms);
std::vector<Measurement> read_measurements_csv(std::istream& in);

}  // namespace bsmm
