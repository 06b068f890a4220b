#include <gtest/gtest.h>

#include <cstring>

#include "bsmm/rng.hpp"
#include "bsmm/spmm.hpp"
#include "bsmm/synth.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace bsmm;

namespace {

template <Scalar T>
bool bitwise_equal(const DenseMatrix<T>& x, const DenseMatrix<T>& y) {
  return x.n_rows() == y.n_rows() && x.n_cols() == y.n_cols() &&
         std::memcmp(x.data().data(), y.data().data(), x.data().size() * sizeof(T)) == 0;
}

}  // namespace

TEST(TileMma, IdentityCopiesB) {
  const TileShape s{4, 3, 4};
  std::vector<float> a(16, 0.f), b(12), c(12, 0.f);
  for (int i = 0; i < 4; ++i) a[i * 4 + i] = 1.f;
  for (int i = 0; i < 12; ++i) b[i] = static_cast<float>(i) - 5.5f;
  tile_mma<float>(a, b, c, s);
  EXPECT_EQ(c, b);
}

TEST(TileMma, OnesAndAccumulation) {
  const TileShape s{2, 2, 2};
  std::vector<double> a(4, 1.0), b(4, 1.0), c(4, 0.0);
  tile_mma<double>(a, b, c, s);
  EXPECT_EQ(c, std::vector<double>(4, 2.0));
  tile_mma<double>(a, b, c, s);
  EXPECT_EQ(c, std::vector<double>(4, 4.0));
}

TEST(TileMma, MatchesDenseGemmOnDefaultShape) {
  const TileShape s{16, 8, 8};
  auto a = gen_dense<float>(16, 8, 1), b = gen_dense<float>(8, 8, 2);
  std::vector<float> c(128, 0.f);
  tile_mma<float>(a.data(), b.data(), c, s);
  EXPECT_EQ(DenseMatrix<float>(16, 8, c), dense_gemm_reference(a, b));
}

TEST(TileMma, RejectsWrongSizes) {
  std::vector<float> a(4), b(4), c(3);
  EXPECT_THROW(tile_mma<float>(a, b, c, {2, 2, 2}), std::invalid_argument);
}

TEST(BcsrSpmm, BlockedIdentityReturnsB) {
  for (index_t n : {1, 16, 37}) {
    auto ab = to_bcsr(CsrMatrix<float>::identity(n), {16, 8});
    auto b = gen_dense<float>(n, 11, 3);
    EXPECT_EQ(bcsr_spmm(ab, b), b);
  }
}

TEST(BcsrSpmm, BandAgreesWithOracle) {
  auto a = gen_band<float>({64, 8, 5});
  auto ab = to_bcsr(a, {16, 8});
  auto b = gen_dense<float>(64, 8, 6);
  EXPECT_LE(fixtures::worst_relative_error(bcsr_spmm(ab, b), csr_spmm_reference(from_bcsr(ab), b)), 1e-5);
}

TEST(BcsrSpmm, MatchesOracleBitwiseOnCorpus) {
  const BlockDims dims[] = {{16, 8}, {16, 16}, {8, 8}, {3, 5}};
  for (const auto& [name, a] : fixtures::corpus())
    for (const auto& d : dims)
      for (index_t n : {1, 7, 8, 20}) {
        auto b = gen_dense<float>(a.n_cols(), n, 9);
        auto ab = to_bcsr(a, d);
        SpmmOptions o;
        const auto ref = csr_spmm_reference(a, b);
        for (index_t tile_n : {index_t{8}, index_t{16}, index_t{5}}) {
          o.tile_n = tile_n;
          ASSERT_TRUE(bitwise_equal(bcsr_spmm(ab, b, o), ref)) << name << " " << to_string(d) << " N=" << n;
          ASSERT_TRUE(bitwise_equal(bcsr_spmm_serial(ab, b, o), ref)) << name;
        }
      }
}

TEST(BcsrSpmm, SkipEmptyOffIsBitwiseIdentical) {
  for (const auto& [name, a] : fixtures::corpus()) {
    auto ab = to_bcsr(a, {16, 8});
    auto b = gen_dense<float>(a.n_cols(), 9, 2);
    SpmmOptions on, off;
    off.skip_empty = false;
    EXPECT_TRUE(bitwise_equal(bcsr_spmm(ab, b, on), bcsr_spmm(ab, b, off))) << name;
  }
}

TEST(BcsrSpmm, CountersFollowBlockCounts) {
  for (const auto& [name, a] : fixtures::corpus())
    for (index_t n : {1, 8, 9, 24}) {
      auto ab = to_bcsr(a, {16, 8});
      auto b = gen_dense<float>(a.n_cols(), n, 2);
      const index_t panels = ceil_div(n, index_t{8});
      SpmmCounters on, off;
      SpmmOptions o;
      bcsr_spmm(ab, b, o, &on);
      EXPECT_EQ(on.tile_mma_calls, ab.n_blocks() * panels) << name;
      EXPECT_EQ(on.blocks_touched, ab.n_blocks() * panels) << name;
      EXPECT_EQ(on.tiles, ab.n_block_rows() * panels) << name;
      o.skip_empty = false;
      bcsr_spmm(ab, b, o, &off);
      EXPECT_EQ(off.tile_mma_calls, ab.grid_blocks() * panels) << name;
      SpmmCounters serial;
      bcsr_spmm_serial(ab, b, o, &serial);
      EXPECT_EQ(serial.tile_mma_calls, off.tile_mma_calls) << name;
    }
}

TEST(BcsrSpmm, DeterministicAcrossWorkerCounts) {
  auto a = gen_uniform_random<double>(700, 500, 0.02, 3);
  auto ab = to_bcsr(a, {16, 8});
  auto b = gen_dense<double>(500, 33, 4);
  SpmmOptions o;
  o.workers = 1;
  const auto one = bcsr_spmm(ab, b, o);
  for (int w : {2, 3, 4, 8, 0}) {
    o.workers = w;
    EXPECT_TRUE(bitwise_equal(bcsr_spmm(ab, b, o), one)) << w;
  }
}

TEST(BcsrSpmm, DimensionMismatchThrows) {
  auto ab = to_bcsr(CsrMatrix<float>::identity(10), {16, 8});
  EXPECT_THROW(bcsr_spmm(ab, DenseMatrix<float>(9, 2)), std::invalid_argument);
  EXPECT_THROW(bcsr_spmm_serial(ab, DenseMatrix<float>(11, 2)), std::invalid_argument);
  SpmmOptions bad;
  bad.tile_n = 0;
  EXPECT_THROW(bcsr_spmm(ab, DenseMatrix<float>(10, 2), bad), std::invalid_argument);
}

TEST(BcsrSpmm, ZeroColumnOperand) {
  auto ab = to_bcsr(CsrMatrix<float>::identity(10), {16, 8});
  const auto c = bcsr_spmm(ab, DenseMatrix<float>(10, 0));
  EXPECT_EQ(c.n_rows(), 10);
  EXPECT_EQ(c.n_cols(), 0);
}

TEST(SpmmPipeline, EqualsOracleForAnyInput) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const index_t m = 1 + static_cast<index_t>(rng.below(300)), k = 1 + static_cast<index_t>(rng.below(300));
    auto a = gen_uniform_random<float>(m, k, 0.3 * rng.uniform(), seed);
    auto b = gen_dense<float>(k, 1 + static_cast<index_t>(rng.below(20)), seed);
    PipelineConfig cfg;
    cfg.tau = rng.uniform();
    cfg.keep_best = rng.below(2) == 0;
    cfg.mode = rng.below(2) == 0 ? ReorderMode::rows : ReorderMode::rows_cols;
    const auto ref = csr_spmm_reference(a, b);
    const auto c = spmm_pipeline(a, b, cfg);
    if (cfg.mode == ReorderMode::rows) {
      EXPECT_EQ(fixtures::worst_relative_error(c, ref), 0.0) << "seed " << seed;
    } else {
      // Permuted columns change the summation order, so compare against the term magnitudes.
      EXPECT_LE(fixtures::worst_scaled_error(c, ref, a, b), 1e-5) << "seed " << seed;
    }
  }
}

TEST(SpmmPipeline, BandPathMatchesNoReorder) {
  auto a = gen_band<float>({300, 4, 2});
  auto b = gen_dense<float>(300, 8, 1);
  PipelineConfig with, without;
  without.reorder = false;
  const SpmmPlan<float> p1(a, with), p2(a, without);
  EXPECT_TRUE(p1.report().rows.is_identity());
  EXPECT_EQ(p1.blocked().n_blocks(), p2.blocked().n_blocks());
  EXPECT_TRUE(bitwise_equal(p1.execute(b), p2.execute(b)));
}

TEST(SpmmPipeline, KeepOrderLeavesClusteredRows) {
  ClusterSpec cs;
  cs.k = 2;
  cs.rows_per_cluster = 40;
  cs.density = 1.0;
  cs.n_cols = 64;
  cs.disjoint = true;
  cs.shuffle = ShuffleMode::interleave;
  const auto g = gen_clustered<float>(cs);
  auto b = gen_dense<float>(64, 8, 3);
  PipelineConfig cfg;
  cfg.tau = 0.5;
  const SpmmPlan<float> plan(g.matrix, cfg);
  ASSERT_FALSE(plan.report().rows.is_identity());
  SpmmOptions o;
  o.unpermute_output = false;
  const auto clustered = plan.execute(b, o);
  const auto ref = csr_spmm_reference(g.matrix, b);
  EXPECT_EQ(clustered, permute_rows(ref, plan.report().rows));
  EXPECT_EQ(unpermute_rows(clustered, plan.report().rows), ref);
}

TEST(SpmmPlan, ReusableAcrossOperands) {
  auto a = gen_uniform_random<double>(120, 90, 0.05, 1);
  PipelineConfig cfg;
  cfg.mode = ReorderMode::rows_cols;
  cfg.keep_best = false;
  const SpmmPlan<double> plan(a, cfg);
  for (std::uint64_t s = 0; s < 4; ++s) {
    auto b = gen_dense<double>(90, 1 + static_cast<index_t>(s) * 5, s);
    EXPECT_LE(fixtures::worst_scaled_error(plan.execute(b), csr_spmm_reference(a, b), a, b), 1e-12);
  }
  EXPECT_THROW(plan.execute(DenseMatrix<double>(89, 2)), std::invalid_argument);
}

TEST(SpmmPipeline, SingleColumnOperand) {
  auto a = gen_uniform_random<float>(200, 150, 0.05, 1);
  auto b = gen_dense<float>(150, 1, 2);
  EXPECT_EQ(spmm_pipeline(a, b, PipelineConfig{}), csr_spmm_reference(a, b));
}

TEST(MaxRelativeError, Definition) {
  DenseMatrix<double> x(1, 3, {1.0, 2.0, 0.0}), r(1, 3, {1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(max_relative_error(x, r), 1.0);
  DenseMatrix<double> nan(1, 1, {std::nan("")}), one(1, 1, {1.0});
  EXPECT_TRUE(std::isinf(max_relative_error(nan, one)));
  EXPECT_THROW(max_relative_error(DenseMatrix<double>(1, 2), one), std::invalid_argument);
}

TEST(ResolveWorkers, AutoIsPositive) {
  EXPECT_GE(resolve_workers(0), 1);
  EXPECT_EQ(resolve_workers(3), 3);
}
