#include "bsmm/report_json.hpp"

namespace bsmm {

using nlohmann::json;

void compute_throughput(BenchRecord& r) {
  if (r.mean_s <= 0.0) {
    r.gflops = r.padded_gflops = 0.0;
    return;
  }
  const double n = static_cast<double>(r.n_dense_cols);
  r.gflops = 2.0 * static_cast<double>(r.nnz) * n / r.mean_s * 1e-9;
  r.padded_gflops = 2.0 * static_cast<double>(r.after.n_e) * static_cast<double>(r.dims.area()) * n / r.mean_s * 1e-9;
}

json to_json(const BlockStats& s, bool per_row) {
  json j = {
      {"n_e", s.n_e},
      {"nnz", s.nnz},
      {"dims", to_string(s.dims)},
      {"n_block_rows", static_cast<index_t>(s.blocks_per_row.size())},
      {"mean", s.mean},
      {"std", s.std},
      {"padding_ratio", s.padding_ratio},
      {"density", s.density},
  };
  if (per_row) j["blocks_per_row"] = s.blocks_per_row;
  return j;
}

json to_json(const ReorderReport& r) {
  return {
      {"tau", r.tau},
      {"mode", to_string(r.mode)},
      {"keep_best", r.keep_best},
      {"applied", r.applied},
      {"row_permutation_identity", r.rows.is_identity()},
      {"column_permutation_identity", !r.cols || r.cols->is_identity()},
      {"before", to_json(r.before)},
      {"after", to_json(r.after)},
      {"ratio", r.reduction_ratio()},
  };
}

json to_json(const PerfModel& m, const std::string& label) {
  return {
      {"label", label},     {"t_e", m.t_e},
      {"t_init", m.t_init}, {"r2", m.r2},
      {"degenerate", m.degenerate}, {"n_points", m.n_points},
  };
}

json to_json(const Measurement& m) {
  return {
      {"label", m.label},
      {"n_e", m.n_e},
      {"t_total_s", m.t_total},
      {"cv", m.cv},
      {"tile_mma_calls", m.tile_mma_calls},
      {"grid_blocks", m.grid_blocks},
      {"bandwidth", m.bandwidth},
      {"repeats", m.repeats},
  };
}

json to_json(const BenchRecord& r) {
  return {
      {"matrix", r.matrix},
      {"dims", to_string(r.dims)},
      {"tau", r.tau},
      {"mode", to_string(r.mode)},
      {"reordered", r.reordered},
      {"N", r.n_dense_cols},
      {"nnz", r.nnz},
      {"before", to_json(r.before)},
      {"after", to_json(r.after)},
      {"skip_empty", r.skip_empty},
      {"workers", r.workers},
      {"repeats", r.repeats},
      {"mean_s", r.mean_s},
      {"cv", r.cv},
      {"tile_mma_calls", r.tile_mma_calls},
      {"blocks_touched", r.blocks_touched},
      {"gflops", r.gflops},
      {"padded_gflops", r.padded_gflops},
      {"verified", r.verified},
      {"max_rel_error", r.max_rel_error},
  };
}

}  // namespace bsmm
