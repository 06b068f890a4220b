// bsmm: command-line front end for blocking, reordering, blocked SpMM,
// benchmark sweeps and performance-model fitting.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsmm/blocking.hpp"
#include "bsmm/matrix_market.hpp"
#include "bsmm/perf_model.hpp"
#include "bsmm/reorder.hpp"
#include "bsmm/report_json.hpp"
#include "bsmm/spmm.hpp"
#include "bsmm/synth.hpp"

namespace {

using namespace bsmm;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 3;

/// Flags shared by several subcommands.
struct Common {
  std::string input;
  std::string dims = "16x8";
  std::string precision = "f32";
  bool keep_zeros = false;
  double tau = 0.9;
  std::string mode = "rows";
  bool keep_best = true;
  std::string output = "json";
};

void add_input(CLI::App* cmd, Common& c) {
  cmd->add_option("input,-i,--input", c.input, "Matrix Market file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--dims", c.dims, "Block dims HxW")->capture_default_str();
  cmd->add_option("--precision", c.precision, "Scalar type")
      ->check(CLI::IsMember({"f32", "f64"}))
      ->capture_default_str();
  cmd->add_flag("--keep-explicit-zeros", c.keep_zeros, "Keep explicit zeros as structural entries");
}

void add_reorder_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--tau", c.tau, "Jaccard distance threshold for merging rows")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--mode", c.mode, "Reordering mode")
      ->check(CLI::IsMember({"rows", "rows-cols"}))
      ->capture_default_str();
  cmd->add_flag("--keep-best,!--no-keep-best", c.keep_best,
                "Keep the permutation only if it lowers the block count (default on)");
}

void add_output_flag(CLI::App* cmd, std::string& output) {
  cmd->add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

bool parse_on_off(const std::string& v) { return v == "on"; }

template <Scalar T>
CsrMatrix<T> load(const Common& c) {
  return read_matrix_market<T>(std::filesystem::path(c.input), MatrixMarketOptions{c.keep_zeros});
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

// ---------------------------------------------------------------- convert

template <Scalar T>
int run_convert(const Common& c, const std::string& out_path, bool per_row) {
  const auto a = load<T>(c);
  const BlockDims dims = parse_block_dims(c.dims);
  const auto ab = to_bcsr(a, dims);
  if (!out_path.empty()) write_bcsr(std::filesystem::path(out_path), ab);
  json j = to_json(block_stats(ab, a.nnz()), per_row);
  const auto bounds = block_count_bounds(a.nnz(), a.n_rows(), a.n_cols(), dims);
  j["n_rows"] = a.n_rows();
  j["n_cols"] = a.n_cols();
  j["grid_blocks"] = ab.grid_blocks();
  j["bounds"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
  print_json(j);
  return 0;
}

// ---------------------------------------------------------------- reorder

template <Scalar T>
int run_reorder(const Common& c, const std::string& perm_out, const std::string& matrix_out) {
  const auto a = load<T>(c);
  const auto report = evaluate_reordering(a, parse_block_dims(c.dims), c.tau, parse_reorder_mode(c.mode), c.keep_best);
  if (!perm_out.empty()) {
    std::ofstream out(perm_out);
    if (!out) throw std::runtime_error("cannot create " + perm_out);
    write_permutation(out, report.rows);
  }
  if (!matrix_out.empty()) write_matrix_market(std::filesystem::path(matrix_out), apply_reordering(a, report));
  json j = to_json(report);
  j["matrix"] = c.input;
  print_json(j);
  return 0;
}

// ---------------------------------------------------------------- spmm

struct SpmmArgs {
  std::string dense;
  index_t n_dense_cols = 8;
  std::uint64_t seed = 1;
  std::string skip_empty = "on";
  int workers = 0;
  index_t tile_n = 8;
  index_t repeats = 10;
  bool verify = false;
  bool no_reorder = false;
  bool keep_order = false;
  std::string result;
};

void write_record_csv(std::ostream& out, const BenchRecord& r) {
  out << "matrix,dims,tau,mode,reordered,N,nnz,n_e_before,n_e_after,skip_empty,workers,repeats,mean_s,cv,"
         "tile_mma_calls,blocks_touched,gflops,padded_gflops,verified,max_rel_error\n";
  std::ostringstream row;
  row.precision(10);
  row << csv_escape(r.matrix) << ',' << to_string(r.dims) << ',' << r.tau << ',' << to_string(r.mode) << ','
      << r.reordered << ',' << r.n_dense_cols << ',' << r.nnz << ',' << r.before.n_e << ',' << r.after.n_e << ','
      << r.skip_empty << ',' << r.workers << ',' << r.repeats << ',' << r.mean_s << ',' << r.cv << ','
      << r.tile_mma_calls << ',' << r.blocks_touched << ',' << r.gflops << ',' << r.padded_gflops << ','
      << r.verified << ',' << r.max_rel_error << '\n';
  out << row.str();
}

template <Scalar T>
int run_spmm(const Common& c, const SpmmArgs& s) {
  const auto a = load<T>(c);
  DenseMatrix<T> b;
  if (!s.dense.empty()) {
    std::ifstream in(s.dense);
    if (!in) throw std::runtime_error("cannot open " + s.dense);
    b = read_dense_text<T>(in);
  } else {
    b = gen_dense<T>(a.n_cols(), s.n_dense_cols, s.seed);
  }

  PipelineConfig config;
  config.dims = parse_block_dims(c.dims);
  config.tau = c.tau;
  config.mode = parse_reorder_mode(c.mode);
  config.reorder = !s.no_reorder;
  config.keep_best = c.keep_best;
  const SpmmPlan<T> plan(a, config);

  SpmmOptions opts;
  opts.tile_n = s.tile_n;
  opts.workers = s.workers;
  opts.skip_empty = parse_on_off(s.skip_empty);
  opts.unpermute_output = !s.keep_order;

  SpmmCounters counters;
  DenseMatrix<T> result = plan.execute(b, opts, &counters);  // warm-up, also the reported result
  std::vector<double> times;
  for (index_t r = 0; r < s.repeats; ++r) {
    SpmmCounters run;
    (void)plan.execute(b, opts, &run);
    times.push_back(run.wall_seconds);
  }
  const TimingSummary ts = summarize_timings(times);

  BenchRecord rec;
  rec.matrix = c.input;
  rec.dims = config.dims;
  rec.tau = c.tau;
  rec.mode = config.mode;
  rec.reordered = plan.report().applied;
  rec.n_dense_cols = b.n_cols();
  rec.nnz = a.nnz();
  rec.before = plan.report().before;
  rec.after = plan.report().after;
  rec.skip_empty = opts.skip_empty;
  rec.workers = resolve_workers(opts.workers);
  rec.repeats = s.repeats;
  rec.mean_s = ts.mean;
  rec.cv = ts.cv;
  rec.tile_mma_calls = counters.tile_mma_calls;
  rec.blocks_touched = counters.blocks_touched;
  compute_throughput(rec);

  bool verify_failed = false;
  if (s.verify) {
    DenseMatrix<T> oracle = csr_spmm_reference(a, b);
    if (s.keep_order) oracle = permute_rows(oracle, plan.report().rows);
    rec.max_rel_error = max_relative_error(result, oracle);
    const double tol = sizeof(T) == 4 ? 1e-5 : 1e-12;
    rec.verified = rec.max_rel_error <= tol;
    if (!rec.verified) {
      verify_failed = true;
      std::cerr << "bsmm spmm: verification FAILED, max relative error " << rec.max_rel_error << " exceeds " << tol
                << '\n';
    }
  }

  if (!s.result.empty()) {
    std::ofstream out(s.result);
    if (!out) throw std::runtime_error("cannot create " + s.result);
    write_dense_text(out, result);
  }
  if (c.output == "csv") write_record_csv(std::cout, rec);
  else print_json(to_json(rec));
  return verify_failed ? kExitVerifyFailed : 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  index_t band_n = 4096;
  std::vector<index_t> bandwidths{16, 32, 64, 128, 256, 512};
  std::vector<std::string> matrices;
  std::vector<std::string> variants{"on", "off"};
  index_t n_dense_cols = 8;
  index_t tile_n = 8;
  index_t repeats = 10;
  int workers = 0;
  std::uint64_t seed = 1;
  std::string csv;
};

constexpr const char* kBenchCsvHeader =
    "n_e,t_total_s,cv,label,matrix,bandwidth,grid_blocks,tile_mma_calls,repeats,nnz,gflops,padded_gflops\n";

template <Scalar T>
int run_bench(const Common& c, const BenchArgs& args) {
  const BlockDims dims = parse_block_dims(c.dims);
  std::ostringstream csv;
  csv.precision(17);
  csv << kBenchCsvHeader;
  json records = json::array();

  auto emit = [&](const Measurement& m, const std::string& matrix, index_t nnz) {
    const double useful = m.t_total > 0 ? 2.0 * nnz * args.n_dense_cols / m.t_total * 1e-9 : 0.0;
    const double padded = m.t_total > 0 ? 2.0 * m.n_e * dims.area() * args.n_dense_cols / m.t_total * 1e-9 : 0.0;
    csv << m.n_e << ',' << m.t_total << ',' << m.cv << ',' << m.label << ',' << csv_escape(matrix) << ','
        << m.bandwidth << ',' << m.grid_blocks << ',' << m.tile_mma_calls << ',' << m.repeats << ',' << nnz << ','
        << useful << ',' << padded << '\n';
    json j = to_json(m);
    j["matrix"] = matrix;
    j["nnz"] = nnz;
    j["gflops"] = useful;
    j["padded_gflops"] = padded;
    records.push_back(std::move(j));
  };

  for (const auto& variant : args.variants) {
    SpmmOptions opts;
    opts.tile_n = args.tile_n;
    opts.workers = args.workers;
    opts.skip_empty = parse_on_off(variant);
    if (args.matrices.empty()) {
      SweepConfig sc;
      sc.n = args.band_n;
      sc.bandwidths = args.bandwidths;
      sc.n_dense_cols = args.n_dense_cols;
      sc.dims = dims;
      sc.opts = opts;
      sc.repeats = args.repeats;
      sc.seed = args.seed;
      for (const auto& m : sweep_band<T>(sc))
        emit(m, "band(n=" + std::to_string(args.band_n) + ")", band_nnz(args.band_n, m.bandwidth));
    } else {
      for (const auto& path : args.matrices) {
        Common mc = c;
        mc.input = path;
        const auto a = load<T>(mc);
        PipelineConfig config;
        config.dims = dims;
        config.tau = c.tau;
        config.mode = parse_reorder_mode(c.mode);
        config.keep_best = c.keep_best;
        const SpmmPlan<T> plan(a, config);
        const auto b = gen_dense<T>(a.n_cols(), args.n_dense_cols, args.seed);
        SpmmCounters counters;
        (void)plan.execute(b, opts, &counters);
        std::vector<double> times;
        for (index_t r = 0; r < args.repeats; ++r) {
          SpmmCounters run;
          (void)plan.execute(b, opts, &run);
          times.push_back(run.wall_seconds);
        }
        const TimingSummary ts = summarize_timings(times);
        Measurement m;
        m.n_e = plan.blocked().n_blocks();
        m.t_total = ts.mean;
        m.cv = ts.cv;
        m.label = measurement_label(opts, dims, args.n_dense_cols);
        m.tile_mma_calls = counters.tile_mma_calls;
        m.grid_blocks = plan.blocked().grid_blocks();
        m.repeats = args.repeats;
        emit(m, path, a.nnz());
      }
    }
  }

  if (!args.csv.empty()) {
    std::ofstream out(args.csv);
    if (!out) throw std::runtime_error("cannot create " + args.csv);
    out << csv.str();
  }
  if (c.output == "csv") std::cout << csv.str();
  else print_json(records);
  return 0;
}

// ---------------------------------------------------------------- fit-model

int run_fit(const std::string& path, const std::string& label_filter, const std::string& output) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto all = read_measurements_csv(in);
  std::map<std::string, std::vector<Measurement>> by_label;
  for (const auto& m : all)
    if (label_filter.empty() || m.label == label_filter) by_label[m.label].push_back(m);
  if (by_label.empty()) throw std::invalid_argument("no measurements to fit");

  json models = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "label,t_e,t_init,r2,degenerate,n_points\n";
  for (const auto& [label, ms] : by_label) {
    const PerfModel model = fit(ms);
    models.push_back(to_json(model, label));
    csv << csv_escape(label) << ',' << model.t_e << ',' << model.t_init << ',' << model.r2 << ',' << model.degenerate
        << ',' << model.n_points << '\n';
  }
  if (output == "csv") std::cout << csv.str();
  else print_json(json{{"models", models}});
  return 0;
}

// ---------------------------------------------------------------- generators

template <Scalar T>
void write_matrix(const std::string& path, const CsrMatrix<T>& a) {
  if (path.empty() || path == "-") write_matrix_market(std::cout, a);
  else write_matrix_market(std::filesystem::path(path), a);
}

int dispatch(const std::string& precision, auto&& fn) {
  return precision == "f64" ? fn.template operator()<double>() : fn.template operator()<float>();
}

void print_suitesparse_urls() {
  // Group/name pairs in the SuiteSparse Matrix Collection.
  static const std::pair<const char*, const char*> kMatrices[] = {
      {"Andrianov", "mip1"},   {"QCD", "conf5_4-8x8-05"}, {"Williams", "cant"},
      {"Williams", "pdb1HYS"}, {"Bova", "rma10"},         {"Williams", "cop20k_A"},
      {"Williams", "consph"},  {"DNVS", "shipsec1"},      {"IBM_EDA", "dc2"},
  };
  for (const auto& [group, name] : kMatrices)
    std::cout << name << "  https://sparse.tamu.edu/MM/" << group << '/' << name
              << ".tar.gz\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse SpMM: BCSR blocking, similarity row reordering, tiled SpMM, performance model"};
  app.require_subcommand(1);
  std::string precision = "f32";
  app.add_option("--precision", precision, "Scalar type for generated files and computations")
      ->check(CLI::IsMember({"f32", "f64"}));

  Common conv;
  std::string conv_out;
  bool per_row = false;
  auto* convert = app.add_subcommand("convert", "Matrix Market -> BCSR binary dump; prints block statistics JSON");
  add_input(convert, conv);
  convert->add_option("-o,--output-file", conv_out, "BCSR dump path");
  convert->add_flag("--per-row", per_row, "Include blocks per block row");

  Common stats;
  bool stats_per_row = false;
  auto* stats_cmd = app.add_subcommand("stats", "Print block statistics JSON");
  add_input(stats_cmd, stats);
  stats_cmd->add_flag("--per-row", stats_per_row, "Include blocks per block row");

  Common reo;
  std::string perm_out, reordered_out;
  auto* reorder = app.add_subcommand("reorder", "Cluster rows and report block counts before/after (JSON)");
  add_input(reorder, reo);
  add_reorder_flags(reorder, reo);
  reorder->add_option("--perm-out", perm_out, "Write the row permutation (one index per line)");
  reorder->add_option("--matrix-out", reordered_out, "Write the reordered matrix (Matrix Market)");

  Common sp;
  SpmmArgs sargs;
  auto* spmm = app.add_subcommand("spmm", "Run the blocked SpMM pipeline and print a benchmark record");
  add_input(spmm, sp);
  add_reorder_flags(spmm, sp);
  add_output_flag(spmm, sp.output);
  spmm->add_option("--dense", sargs.dense, "Dense operand B (text: 'rows cols' then rows)")->check(CLI::ExistingFile);
  spmm->add_option("-N,--N", sargs.n_dense_cols, "Columns of the generated B when --dense is absent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  spmm->add_option("--seed", sargs.seed, "Seed for the generated B")->capture_default_str();
  spmm->add_option("--skip-empty", sargs.skip_empty, "Iterate stored blocks only (on) or the full grid (off)")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  spmm->add_option("--workers", sargs.workers, "Threads (0 = all)")->check(CLI::NonNegativeNumber);
  spmm->add_option("--tile-n", sargs.tile_n, "Output panel width")->check(CLI::PositiveNumber)->capture_default_str();
  spmm->add_option("--repeats", sargs.repeats, "Timed runs after one warm-up")
      ->check(CLI::Range(index_t{1}, index_t{1000000}))
      ->capture_default_str();
  spmm->add_flag("--verify", sargs.verify, "Compare with the CSR reference kernel; exit 3 on mismatch");
  spmm->add_flag("--no-reorder", sargs.no_reorder, "Skip the reordering step");
  spmm->add_flag("--keep-order", sargs.keep_order, "Leave result rows in clustered order");
  spmm->add_option("--result", sargs.result, "Write C as dense text");

  Common be;
  BenchArgs bargs;
  std::vector<std::string> variants;
  auto* bench = app.add_subcommand("bench", "Band sweep (default) or matrix list; CSV + JSON measurements");
  bench->add_option("--dims", be.dims, "Block dims HxW")->capture_default_str();
  add_reorder_flags(bench, be);
  add_output_flag(bench, be.output);
  bench->add_option("--band-n", bargs.band_n, "Band matrix order")->capture_default_str();
  bench->add_option("--bandwidths", bargs.bandwidths, "Half-bandwidths to sweep")->delimiter(',');
  bench->add_option("--matrices", bargs.matrices, "Matrix Market files instead of the band sweep")
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  bench->add_option("--variants", bargs.variants, "skip-empty variants to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"on", "off"}));
  bench->add_option("-N,--N", bargs.n_dense_cols, "Columns of B")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--tile-n", bargs.tile_n, "Output panel width")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bargs.repeats, "Timed runs per point")
      ->check(CLI::Range(index_t{1}, index_t{1000000}))
      ->capture_default_str();
  bench->add_option("--workers", bargs.workers, "Threads (0 = all)")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bargs.seed, "Seed for matrices and B")->capture_default_str();
  bench->add_option("--csv", bargs.csv, "Write the measurement CSV here");

  std::string fit_input, fit_label, fit_output = "json";
  auto* fit_cmd = app.add_subcommand("fit-model", "Fit T = t_e * n_e + t_init per label from a measurement CSV");
  fit_cmd->add_option("input,-i,--input", fit_input, "Measurement CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--label", fit_label, "Only fit rows with this label");
  add_output_flag(fit_cmd, fit_output);

  BandSpec band;
  std::string band_values = "uniform", band_out;
  auto* gen_band_cmd = app.add_subcommand("gen-band", "Write a band matrix (Matrix Market)");
  gen_band_cmd->add_option("-n,--n", band.n, "Order")->required();
  gen_band_cmd->add_option("-b,--b", band.b, "Half-bandwidth")->required();
  gen_band_cmd->add_option("--seed", band.seed)->capture_default_str();
  gen_band_cmd->add_option("--values", band_values)->check(CLI::IsMember({"ones", "uniform"}))->capture_default_str();
  gen_band_cmd->add_option("-o,--output-file", band_out, "Destination (default stdout)");

  ClusterSpec cluster;
  std::string shuffle = "random", cluster_out, labels_out;
  auto* gen_clustered_cmd = app.add_subcommand("gen-clustered", "Write a matrix of jittered prototype rows");
  gen_clustered_cmd->add_option("-k,--k", cluster.k, "Prototype count")->capture_default_str();
  gen_clustered_cmd->add_option("--rows-per-cluster", cluster.rows_per_cluster)->capture_default_str();
  gen_clustered_cmd->add_option("--density", cluster.density)->capture_default_str();
  gen_clustered_cmd->add_option("--cols", cluster.n_cols)->capture_default_str();
  gen_clustered_cmd->add_option("--seed", cluster.seed)->capture_default_str();
  gen_clustered_cmd->add_option("--jitter", cluster.jitter)->capture_default_str();
  gen_clustered_cmd->add_option("--shuffle", shuffle)
      ->check(CLI::IsMember({"none", "interleave", "random"}))
      ->capture_default_str();
  gen_clustered_cmd->add_flag("--disjoint", cluster.disjoint, "Prototypes use disjoint column ranges");
  gen_clustered_cmd->add_option("-o,--output-file", cluster_out, "Destination (default stdout)");
  gen_clustered_cmd->add_option("--labels-out", labels_out, "Write the prototype label of each row");

  index_t rnd_rows = 0, rnd_cols = 0;
  double rnd_density = 0.01;
  std::uint64_t rnd_seed = 0;
  std::string rnd_out;
  auto* gen_random_cmd = app.add_subcommand("gen-random", "Write a uniform random sparse matrix");
  gen_random_cmd->add_option("--rows", rnd_rows)->required();
  gen_random_cmd->add_option("--cols", rnd_cols)->required();
  gen_random_cmd->add_option("--density", rnd_density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_random_cmd->add_option("--seed", rnd_seed)->capture_default_str();
  gen_random_cmd->add_option("-o,--output-file", rnd_out, "Destination (default stdout)");

  auto* urls = app.add_subcommand("suitesparse-urls", "Print download URLs of the SuiteSparse test matrices");

  CLI11_PARSE(app, argc, argv);

  // Subcommand --precision overrides the global one.
  auto pick = [&](const Common& c) { return c.precision != "f32" ? c.precision : precision; };

  try {
    if (convert->parsed())
      return dispatch(pick(conv), [&]<Scalar T>() { return run_convert<T>(conv, conv_out, per_row); });
    if (stats_cmd->parsed())
      return dispatch(pick(stats), [&]<Scalar T>() { return run_convert<T>(stats, "", stats_per_row); });
    if (reorder->parsed())
      return dispatch(pick(reo), [&]<Scalar T>() { return run_reorder<T>(reo, perm_out, reordered_out); });
    if (spmm->parsed()) return dispatch(pick(sp), [&]<Scalar T>() { return run_spmm<T>(sp, sargs); });
    if (bench->parsed()) return dispatch(precision, [&]<Scalar T>() { return run_bench<T>(be, bargs); });
    if (fit_cmd->parsed()) return run_fit(fit_input, fit_label, fit_output);
    if (gen_band_cmd->parsed()) {
      band.values = band_values == "ones" ? ValueDist::ones : ValueDist::uniform;
      return dispatch(precision, [&]<Scalar T>() {
        write_matrix(band_out, gen_band<T>(band));
        return 0;
      });
    }
    if (gen_clustered_cmd->parsed()) {
      cluster.shuffle = shuffle == "none" ? ShuffleMode::none
                        : shuffle == "interleave" ? ShuffleMode::interleave
                                                  : ShuffleMode::random;
      return dispatch(precision, [&]<Scalar T>() {
        const auto gen = gen_clustered<T>(cluster);
        write_matrix(cluster_out, gen.matrix);
        if (!labels_out.empty()) {
          std::ofstream out(labels_out);
          for (index_t l : gen.labels) out << l << '\n';
        }
        return 0;
      });
    }
    if (gen_random_cmd->parsed())
      return dispatch(precision, [&]<Scalar T>() {
        write_matrix(rnd_out, gen_uniform_random<T>(rnd_rows, rnd_cols, rnd_density, rnd_seed));
        return 0;
      });
    if (urls->parsed()) {
      print_suitesparse_urls();
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "bsmm: parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "bsmm: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
