// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit if
// anything failed. Set BSMM_SUITESPARSE_DIR to a directory holding
// cop20k_A.mtx and mip1.mtx (flat or as <name>/<name>.mtx) to enable AC5.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "bsmm/blocking.hpp"
#include "bsmm/matrix_market.hpp"
#include "bsmm/perf_model.hpp"
#include "bsmm/reorder.hpp"
#include "bsmm/rng.hpp"
#include "bsmm/spmm.hpp"
#include "bsmm/synth.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

namespace {

using namespace bsmm;
namespace fs = std::filesystem;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string d) { return {Verdict::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::fail, std::move(d)}; }
Outcome skip(std::string d) { return {Verdict::skip, std::move(d)}; }

template <typename... Args>
std::string fmt(Args&&... args) {
  std::ostringstream s;
  s.precision(6);
  (s << ... << args);
  return s.str();
}

template <Scalar T>
bool bitwise_equal(const DenseMatrix<T>& x, const DenseMatrix<T>& y) {
  return x.n_rows() == y.n_rows() && x.n_cols() == y.n_cols() &&
         std::memcmp(x.data().data(), y.data().data(), x.data().size() * sizeof(T)) == 0;
}

const BlockDims kDims[] = {{16, 8}, {16, 16}, {8, 8}};

// ------------------------------------------------------------------ AC1

template <Scalar T>
double oracle_error(std::uint64_t seed, Rng& rng, std::string& desc) {
  const index_t m = 1 + static_cast<index_t>(rng.below(2048));
  const index_t k = 1 + static_cast<index_t>(rng.below(2048));
  const double density = std::pow(10.0, -4.0 + rng.uniform() * std::log10(0.5 / 1e-4));
  const BlockDims dims = kDims[rng.below(3)];
  const index_t n_values[] = {1, 8, 128};
  const index_t n = n_values[rng.below(3)];
  PipelineConfig cfg;
  cfg.dims = dims;
  cfg.tau = rng.uniform();
  cfg.keep_best = rng.below(2) == 0;
  const auto a = gen_uniform_random<T>(m, k, density, seed);
  const auto b = gen_dense<T>(k, n, seed + 1);
  desc = fmt(m, "x", k, " d=", density, " ", to_string(dims), " N=", n, " tau=", cfg.tau);
  return fixtures::worst_relative_error(spmm_pipeline(a, b, cfg), csr_spmm_reference(a, b));
}

Outcome ac1() {
  double worst32 = 0.0, worst64 = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(1000 + i);
    std::string desc;
    if (i % 2 == 0) {
      const double e = oracle_error<float>(i, rng, desc);
      worst32 = std::max(worst32, e);
      if (!(e <= 1e-5)) return fail(fmt("config ", i, " (f32 ", desc, ") error ", e, " > 1e-5"));
    } else {
      const double e = oracle_error<double>(i, rng, desc);
      worst64 = std::max(worst64, e);
      if (!(e <= 1e-12)) return fail(fmt("config ", i, " (f64 ", desc, ") error ", e, " > 1e-12"));
    }
  }
  return pass(fmt("200 configs, worst rel error f32 ", worst32, ", f64 ", worst64));
}

// ------------------------------------------------------------------ AC2

Outcome ac2() {
  index_t checks = 0;
  for (const auto& [name, a] : fixtures::corpus())
    for (const auto& d : kDims) {
      const auto bounds = block_count_bounds(a.nnz(), a.n_rows(), a.n_cols(), d);
      const index_t n_e = to_bcsr(a, d).n_blocks();
      if (n_e != fixtures::brute_block_count(a, d.h, d.w)) return fail(fmt(name, ": block count disagrees with enumeration"));
      if (!(bounds.lower <= n_e && n_e <= bounds.upper))
        return fail(fmt(name, " ", to_string(d), ": n_e=", n_e, " outside [", bounds.lower, ", ", bounds.upper, "]"));
      ++checks;
    }
  return pass(fmt(checks, " (matrix, dims) pairs within bounds"));
}

// ------------------------------------------------------------------ AC3

Outcome ac3() {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s + 77);
    const index_t m = 1 + static_cast<index_t>(rng.below(400));
    const index_t k = 1 + static_cast<index_t>(rng.below(400));
    const auto a = gen_uniform_random<float>(m, k, 0.001 + 0.2 * rng.uniform(), s);
    const auto b = gen_dense<float>(k, 1 + static_cast<index_t>(rng.below(16)), s + 3);
    std::vector<index_t> map(static_cast<std::size_t>(m));
    std::iota(map.begin(), map.end(), 0);
    for (index_t i = m - 1; i > 0; --i) std::swap(map[i], map[rng.below(static_cast<std::uint64_t>(i + 1))]);
    const Permutation p(std::move(map));

    const auto expected = permute_rows(csr_spmm_reference(a, b), p);
    const auto pa = apply_row_permutation(a, p);
    if (!(csr_spmm_reference(pa, b) == expected)) return fail(fmt("pair ", s, ": reference product differs"));
    PipelineConfig cfg;
    cfg.reorder = false;
    if (!(spmm_pipeline(pa, b, cfg) == expected)) return fail(fmt("pair ", s, ": blocked product differs"));
  }
  return pass("50 random (A, P) pairs exact");
}

// ------------------------------------------------------------------ AC4

Outcome ac4() {
  ClusterSpec cs;
  cs.k = 2;
  cs.rows_per_cluster = 256;
  cs.density = 1.0;
  cs.n_cols = 512;
  cs.disjoint = true;
  cs.shuffle = ShuffleMode::interleave;
  cs.seed = 4;
  const auto g = gen_clustered<float>(cs);
  const auto r = evaluate_reordering(g.matrix, BlockDims{}, 0.5, ReorderMode::rows, true);
  const double ratio = r.reduction_ratio();
  const std::string d = fmt("n_e ", r.before.n_e, " -> ", r.after.n_e, ", ratio ", ratio);
  return ratio >= 1.8 && ratio <= 2.2 ? pass(d) : fail(d + " outside [1.8, 2.2]");
}

// ------------------------------------------------------------------ AC5

std::optional<fs::path> find_matrix(const fs::path& dir, const std::string& name) {
  for (const auto& p : {dir / (name + ".mtx"), dir / name / (name + ".mtx")})
    if (fs::exists(p)) return p;
  return std::nullopt;
}

Outcome ac5() {
  const char* env = std::getenv("BSMM_SUITESPARSE_DIR");
  if (!env || !*env) return skip("BSMM_SUITESPARSE_DIR not set");
  const auto cop = find_matrix(env, "cop20k_A");
  const auto mip = find_matrix(env, "mip1");
  if (!cop && !mip) return skip(fmt("neither cop20k_A.mtx nor mip1.mtx under ", env));

  const PipelineConfig cfg;
  std::string detail;
  bool ok = true;
  if (cop) {
    const auto r = evaluate_reordering(read_matrix_market<float>(*cop), cfg.dims, cfg.tau, cfg.mode, cfg.keep_best);
    ok &= r.reduction_ratio() >= 1.5;
    detail += fmt("cop20k_A ratio ", r.reduction_ratio(), " (need >= 1.5)");
  } else {
    detail += "cop20k_A absent";
  }
  if (mip) {
    const auto r = evaluate_reordering(read_matrix_market<float>(*mip), cfg.dims, cfg.tau, cfg.mode, cfg.keep_best);
    const double drop = r.after.std > 0 ? r.before.std / r.after.std : INFINITY;
    ok &= drop >= 3.0;
    detail += fmt("; mip1 std ", r.before.std, " -> ", r.after.std, " = ", drop, "x (need >= 3)");
  } else {
    detail += "; mip1 absent";
  }
  return ok ? pass(detail) : fail(detail);
}

// ------------------------------------------------------------------ AC6 / AC7

struct SweepResults {
  std::vector<Measurement> on, off;
};

const SweepResults& band_sweep() {
  static const SweepResults results = [] {
    SweepConfig c;
    c.n = 4096;
    c.bandwidths = {16, 32, 64, 128, 256, 512};
    c.n_dense_cols = 8;
    c.repeats = 10;
    SweepResults r;
    r.on = sweep_band<float>(c);
    c.opts.skip_empty = false;
    r.off = sweep_band<float>(c);
    return r;
  }();
  return results;
}

Outcome ac6() {
  const auto& ms = band_sweep().on;
  const PerfModel m = fit(ms);
  std::string points;
  for (const auto& x : ms) points += fmt(" ", x.n_e, ":", x.t_total * 1e3, "ms");
  const std::string d = fmt("r2 ", m.r2, ", t_e ", m.t_e * 1e9, " ns/block, t_init ", m.t_init * 1e6, " us;", points);
  return m.r2 >= 0.95 && !m.degenerate ? pass(d) : fail(d + " (need r2 >= 0.95)");
}

Outcome ac7() {
  const auto& [on, off] = band_sweep();
  for (std::size_t i = 0; i < on.size(); ++i) {
    // off/on == grid/n_e, compared by cross-multiplication
    if (off[i].tile_mma_calls * on[i].n_e != on[i].tile_mma_calls * on[i].grid_blocks)
      return fail(fmt("b=", on[i].bandwidth, ": counts ", off[i].tile_mma_calls, "/", on[i].tile_mma_calls,
                      " vs grid/n_e ", on[i].grid_blocks, "/", on[i].n_e));
  }
  const double t_on = on.front().t_total, t_off = off.front().t_total;
  const std::string d = fmt("counts exact at all 6 points; b=16 skip-on ", t_on * 1e3, " ms vs dense-grid ",
                            t_off * 1e3, " ms (", t_off / t_on, "x)");
  return t_on < t_off ? pass(d) : fail(d);
}

// ------------------------------------------------------------------ AC8

Outcome ac8() {
  const int max_workers = omp_get_max_threads();
  index_t runs = 0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    Rng rng(s + 900);
    const auto a = gen_uniform_random<float>(500 + static_cast<index_t>(rng.below(1500)),
                                             500 + static_cast<index_t>(rng.below(1500)), 0.002 + 0.05 * rng.uniform(), s);
    const auto b = gen_dense<float>(a.n_cols(), 1 + static_cast<index_t>(rng.below(64)), s);
    PipelineConfig cfg;
    cfg.dims = kDims[s % 3];
    const SpmmPlan<float> plan(a, cfg);
    SpmmOptions o;
    o.skip_empty = s % 2 == 0;
    std::optional<DenseMatrix<float>> first;
    for (int w : {1, 4, max_workers}) {
      o.workers = w;
      for (int rep = 0; rep < 2; ++rep) {
        auto c = plan.execute(b, o);
        if (!first) first = std::move(c);
        else if (!bitwise_equal(c, *first)) return fail(fmt("matrix ", s, " differs at workers=", w));
        ++runs;
      }
    }
  }
  return pass(fmt(runs, " runs bitwise identical over workers {1, 4, ", max_workers, "}"));
}

// ------------------------------------------------------------------ AC9

Outcome ac9() {
  index_t checks = 0;
  for (const auto& [name, a] : fixtures::corpus()) {
    std::stringstream mm;
    write_matrix_market(mm, a);
    if (!(read_matrix_market<float>(mm) == a)) return fail(name + ": Matrix Market round trip (f32)");
    const auto ad = fixtures::to_double(a);
    std::stringstream mmd;
    write_matrix_market(mmd, ad);
    if (!(read_matrix_market<double>(mmd) == ad)) return fail(name + ": Matrix Market round trip (f64)");
    for (const auto& d : kDims) {
      const auto ab = to_bcsr(a, d);
      if (!(from_bcsr(ab) == a)) return fail(fmt(name, " ", to_string(d), ": CSR/BCSR round trip"));
      std::stringstream bin;
      write_bcsr(bin, ab);
      if (!(read_bcsr<float>(bin) == ab)) return fail(fmt(name, " ", to_string(d), ": BCSR dump round trip"));
      ++checks;
    }
  }
  return pass(fmt(fixtures::corpus().size(), " matrices, ", checks, " blocked round trips lossless"));
}

struct Criterion {
  const char* id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"AC1", "oracle equivalence (200 configs)", 120, ac1},
      {"AC2", "block count bounds on corpus", 30, ac2},
      {"AC3", "permutation semantics (50 pairs)", 10, ac3},
      {"AC4", "synthetic reordering ratio in [1.8, 2.2]", 10, ac4},
      {"AC5", "SuiteSparse reordering effect", 600, ac5},
      {"AC6", "performance model linearity r2 >= 0.95", 120, ac6},
      {"AC7", "skip-empty structure and speed", 120, ac7},
      {"AC8", "determinism across worker counts", 30, ac8},
      {"AC9", "lossless round trips", 30, ac9},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.verdict == Verdict::pass && secs > c.budget_s) out = fail(fmt(out.detail, "; took ", secs, " s > budget"));
    const char* tag = out.verdict == Verdict::pass ? "PASS" : out.verdict == Verdict::fail ? "FAIL" : "SKIP";
    failures += out.verdict == Verdict::fail;
    std::cout << tag << ' ' << c.id << ' ' << c.title << " | " << out.detail << " [" << fmt(secs) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
