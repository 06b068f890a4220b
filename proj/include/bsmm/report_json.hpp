#pragma once

#include <string>

#include <json.hpp>

#include "bsmm/blocking.hpp"
#include "bsmm/perf_model.hpp"
#include "bsmm/reorder.hpp"
#include "bsmm/spmm.hpp"

namespace bsmm {

/// One SpMM run as reported by the CLI.
struct BenchRecord {
  std::string matrix;
  BlockDims dims;
  double tau = 0.0;
  ReorderMode mode = ReorderMode::rows;
  bool reordered = false;
  index_t n_dense_cols = 0;
  index_t nnz = 0;
  BlockStats before;
  BlockStats after;
  bool skip_empty = true;
  int workers = 1;
  index_t repeats = 1;
  double mean_s = 0.0;
  double cv = 0.0;
  index_t tile_mma_calls = 0;
  index_t blocks_touched = 0;
  /// 2*nnz*N useful flops per second, in GFLOP/s.
  double gflops = 0.0;
  /// 2*n_e*h*w*N flops actually issued by the microkernel, in GFLOP/s.
  double padded_gflops = 0.0;
  bool verified = false;
  double max_rel_error = 0.0;
};

/// Fills the throughput fields from nnz, N, n_e (after) and mean_s.
void compute_throughput(BenchRecord& r);

nlohmann::json to_json(const BlockStats& s, bool per_row = false);
nlohmann::json to_json(const ReorderReport& r);
nlohmann::json to_json(const PerfModel& m, const std::string& label = {});
nlohmann::json to_json(const Measurement& m);
nlohmann::json to_json(const BenchRecord& r);

}  // namespace bsmm
