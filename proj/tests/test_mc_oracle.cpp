#include "blockfade/mc_oracle.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "blockfade/errors.hpp"
#include "blockfade/specfun.hpp"
#include "test_support.hpp"

namespace blockfade::mc {
namespace {

using testing::config;
using testing::z_score;

SnrValue lin(double x) { return SnrValue::from_linear(x); }

double marquet_closed(int T, int tau, double snr) {
  return kLog2E * specfun::expint_scaled_sum(T - tau, tau + 1.0 / snr);
}

TEST(McConfig, ResolvesDefaultsAndValidates) {
  McConfig cfg;
  EXPECT_EQ(cfg.resolved_samples(SampleKind::scalar), kDefaultScalarSamples);
  EXPECT_EQ(cfg.resolved_samples(SampleKind::matrix), kDefaultMatrixSamples);
  cfg.samples = 5000;
  EXPECT_EQ(cfg.resolved_samples(SampleKind::matrix), 5000u);
  cfg.samples = 99;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_THROW(sample_capacity_siso(lin(1.0), cfg), DomainError);
  cfg.samples = 100;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(McConfig, SubstreamsDiffer) {
  const McConfig cfg = config(20000);
  const auto a = sample_capacity_siso(lin(1.0), cfg.substream(1));
  const auto b = sample_capacity_siso(lin(1.0), cfg.substream(2));
  const auto c = sample_capacity_siso(lin(1.0), cfg.with_stream(3));
  EXPECT_NE(a.mean, b.mean);
  EXPECT_NE(a.mean, c.mean);
}

TEST(SampleCapacitySiso, MatchesClosedForm) {
  const McConfig cfg = config(1'000'000);
  const auto e0 = sample_capacity_siso(lin(1.0), cfg);
  EXPECT_EQ(e0.samples_used, 1'000'000u);
  EXPECT_LE(std::abs(e0.mean - 0.8604), 3 * e0.std_error + 5e-5);
  EXPECT_LE(std::abs(z_score(e0, kLog2E * specfun::expint_scaled(1, 1.0).scaled_value)), 3.0);

  const auto e10 = sample_capacity_siso(lin(10.0), cfg);
  EXPECT_LE(std::abs(z_score(e10, kLog2E * specfun::expint_scaled(1, 0.1).scaled_value)), 3.0);
  EXPECT_NEAR(e10.mean, 2.9066, 3 * e10.std_error + 5e-5);

  // Default sample counts are sized for ~1e-3 bits of standard error.
  EXPECT_LT(e10.std_error, 2e-3);
}

TEST(SampleCapacitySiso, VanishesAtLowSnr) {
  const auto e = sample_capacity_siso(lin(1e-9), config(10000));
  EXPECT_GT(e.mean, 0.0);
  EXPECT_LT(e.mean, 1e-8);
}

TEST(SampleMarquetTerm, MatchesClosedForm) {
  const McConfig cfg = config(1'000'000);
  const auto a = sample_marquet_term(10, 1, lin(1.0), cfg);
  EXPECT_NEAR(marquet_closed(10, 1, 1.0), 2.4064, 5e-5);
  EXPECT_LE(std::abs(z_score(a, marquet_closed(10, 1, 1.0))), 3.0);

  const auto b = sample_marquet_term(2, 1, lin(1.0), cfg);
  EXPECT_NEAR(marquet_closed(2, 1, 1.0), 0.52129, 5e-5);
  EXPECT_LE(std::abs(z_score(b, marquet_closed(2, 1, 1.0))), 3.0);
}

TEST(SampleMarquetTerm, VanishesAndRejectsBadTau) {
  const auto e = sample_marquet_term(4, 3, lin(1e-9), config(1000));
  EXPECT_LT(e.mean, 1e-8);
  EXPECT_THROW(sample_marquet_term(4, 4, lin(1.0), config(1000)), DomainError);
  EXPECT_THROW(sample_marquet_term(4, -1, lin(1.0), config(1000)), DomainError);
}

TEST(SampleCtr, ScalarEqualsCapacity) {
  const auto e = sample_ctr(1, 1, lin(1.0), config(1'000'000));
  EXPECT_LE(std::abs(z_score(e, kLog2E * specfun::expint_scaled(1, 1.0).scaled_value)), 3.0);
}

TEST(SampleCtr, RankOneClosedForm) {
  // log2(e) * sum_{k=1}^{4} eps_k(1), re-derived: 2.21038 (not 2.2106).
  const double closed = kLog2E * specfun::expint_scaled_sum(4, 1.0);
  EXPECT_NEAR(closed, 2.2103758, 5e-7);
  const auto e = sample_ctr(1, 4, lin(1.0), config(100'000));
  EXPECT_LE(std::abs(z_score(e, closed)), 4.0);
}

TEST(SampleCtr, VanishesAndRejectsBadShape) {
  const auto e = sample_ctr(2, 2, lin(1e-9), config(1000));
  EXPECT_LT(e.mean, 1e-7);
  EXPECT_THROW(sample_ctr(0, 2, lin(1.0), config(1000)), DomainError);
  EXPECT_THROW(sample_ctr(2, 0, lin(1.0), config(1000)), DomainError);
}

TEST(SampleCtr, DeterminantCommutation) {
  for (auto [t, r] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{1, 3}, std::pair{4, 2}}) {
    const McConfig cfg = config(100'000, 11);
    const auto a = sample_ctr(t, r, lin(10.0), cfg);
    // Same draws: agreement is to rounding, not just statistical.
    const auto b = sample_ctr_transposed(t, r, lin(10.0), cfg);
    EXPECT_NEAR(a.mean, b.mean, 1e-9) << t << "x" << r;
    // Independent draws: agreement within 4 combined standard errors.
    const auto c = sample_ctr_transposed(t, r, lin(10.0), cfg.with_stream(99));
    EXPECT_LE(std::abs(a.mean - c.mean), 4.0 * std::hypot(a.std_error, c.std_error)) << t << "x" << r;
  }
}

TEST(SampleCtrMulti, MatchesSingleRhoEstimates) {
  const std::vector<double> rhos{0.5, 2.0, 20.0};
  const McConfig cfg = config(20000);
  const auto multi = sample_ctr_multi(2, 3, rhos, cfg);
  ASSERT_EQ(multi.size(), 3u);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const auto single = sample_ctr(2, 3, lin(rhos[i]), cfg.with_stream(50 + i));
    const auto comp = multi.component(i);
    EXPECT_LE(std::abs(comp.mean - single.mean), 4.0 * std::hypot(comp.std_error, single.std_error));
  }
  // Shared draws: strictly increasing in rho per sample, so the differences are tight.
  EXPECT_GT(multi.mean[1], multi.mean[0]);
  EXPECT_GT(multi.mean[2], multi.mean[1]);
  EXPECT_LT(multi.difference_std_error(0, 1), multi.component(1).std_error + multi.component(0).std_error);
}

TEST(SampleCtrNested, ConsistentWithIndependentEstimates) {
  const std::vector<int> rs{1, 2, 5};
  const std::vector<double> rhos{3.0, 3.0, 1.0};
  const McConfig cfg = config(20000);
  const auto nested = sample_ctr_nested(2, rs, rhos, cfg);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto ref = sample_ctr(2, rs[i], lin(rhos[i]), cfg.with_stream(70 + i));
    const auto comp = nested.component(i);
    EXPECT_LE(std::abs(comp.mean - ref.mean), 4.0 * std::hypot(comp.std_error, ref.std_error)) << "r=" << rs[i];
  }
  EXPECT_THROW(sample_ctr_nested(2, std::vector<int>{}, std::vector<double>{}, cfg), DomainError);
}

TEST(SampleDeltaMimo, UniformDiagonalMatchesCtr) {
  const MimoParams p{2, 2, 10, 2, lin(10.0)};
  const McConfig cfg = config(100'000);
  const std::vector<double> diag{2.0, 2.0};
  const auto delta = sample_delta_mimo(p, diag, cfg);
  const double g = 10.0 / (1.0 + 10.0 * 2.0 / 2.0);
  const auto ctr = sample_ctr(2, 8, lin(g), cfg.with_stream(123));
  const double expected = 2.0 * ctr.mean;
  EXPECT_LE(std::abs(delta.mean - expected), 4.0 * std::hypot(delta.std_error, 2.0 * ctr.std_error));
}

TEST(SampleDeltaMimo, SingleAntennaReducesToMarquet) {
  const MimoParams p{1, 1, 6, 2, lin(3.0)};
  const std::vector<double> diag{2.0};
  const auto delta = sample_delta_mimo(p, diag, config(200'000));
  EXPECT_LE(std::abs(z_score(delta, marquet_closed(6, 2, 3.0))), 4.0);
}

TEST(SampleDeltaMimo, PerturbedDiagonalNotSmaller) {
  const MimoParams p{3, 2, 12, 3, lin(10.0)};
  const std::vector<std::vector<double>> diags{{3.0, 3.0, 3.0}, {3.5, 2.5, 3.0}, {4.5, 1.5, 3.0}};
  const auto est = sample_delta_mimo_multi(p, diags, config(50'000));
  for (std::size_t i = 1; i < diags.size(); ++i) {
    EXPECT_GE(est.mean[i], est.mean[0] - 3.0 * est.difference_std_error(i, 0));
  }
}

TEST(SampleDeltaMimo, RejectsInvalidDiagonals) {
  const MimoParams p{2, 2, 10, 2, lin(10.0)};
  const McConfig cfg = config(1000);
  EXPECT_THROW(sample_delta_mimo(p, std::vector<double>{2.0}, cfg), DomainError);
  EXPECT_THROW(sample_delta_mimo(p, std::vector<double>{3.0, 1.5}, cfg), DomainError);
  EXPECT_THROW(sample_delta_mimo(p, std::vector<double>{-1.0, 1.0}, cfg), DomainError);
  EXPECT_NO_THROW(sample_delta_mimo(p, std::vector<double>{4.0, 0.0}, cfg));
}

// --- properties -----------------------------------------------------------

TEST(McProperties, BitIdenticalAcrossThreadCounts) {
  McConfig cfg = config(100'000, 42, 5);  // several blocks, uneven tail
  std::vector<Estimate> cap, mar, ctr;
  std::vector<VectorEstimate> multi;
  const std::vector<double> rhos{1.0, 10.0};
  for (unsigned threads : {1u, 2u, 8u}) {
    cfg.threads = threads;
    cap.push_back(sample_capacity_siso(lin(10.0), cfg));
    mar.push_back(sample_marquet_term(20, 2, lin(1.0), cfg));
    ctr.push_back(sample_ctr(2, 3, lin(5.0), cfg));
    multi.push_back(sample_ctr_multi(2, 2, rhos, cfg));
  }
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_EQ(cap[i].mean, cap[0].mean);
    EXPECT_EQ(cap[i].std_error, cap[0].std_error);
    EXPECT_EQ(mar[i].mean, mar[0].mean);
    EXPECT_EQ(mar[i].std_error, mar[0].std_error);
    EXPECT_EQ(ctr[i].mean, ctr[0].mean);
    EXPECT_EQ(ctr[i].std_error, ctr[0].std_error);
    EXPECT_EQ(multi[i].mean, multi[0].mean);
    EXPECT_EQ(multi[i].covariance, multi[0].covariance);
  }
}

TEST(McProperties, RepeatRunsIdentical) {
  const McConfig cfg = config(30'000, 9);
  const auto a = sample_marquet_term(6, 1, lin(0.1), cfg);
  const auto b = sample_marquet_term(6, 1, lin(0.1), cfg);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(McProperties, StdErrorHalvesWhenSamplesQuadruple) {
  for (double snr : {0.1, 1.0, 100.0}) {
    const auto a = sample_capacity_siso(lin(snr), config(50'000));
    const auto b = sample_capacity_siso(lin(snr), config(200'000));
    const double ratio = a.std_error / b.std_error;
    EXPECT_NEAR(ratio, 2.0, 0.4) << "snr=" << snr;
  }
}

TEST(McProperties, StdErrorIsSampleSdOverRootN) {
  // Two-point sanity via VectorEstimate: variance of a component is cov(i,i)/n.
  const std::vector<double> rhos{1.0};
  const auto v = sample_ctr_multi(1, 1, rhos, config(10'000));
  EXPECT_DOUBLE_EQ(v.component(0).std_error, std::sqrt(v.covariance[0] / 10'000.0));
}

TEST(McProperties, ClosedFormsAgreeOnStandardGrid) {
  const McConfig cfg = config(1'000'000, 31);
  for (double db : {-10.0, 0.0, 10.0, 20.0}) {
    const SnrValue snr = SnrValue::from_db(db);
    const auto cap = sample_capacity_siso(snr, cfg.with_stream(1));
    EXPECT_LE(std::abs(z_score(cap, kLog2E * specfun::expint_scaled(1, 1.0 / snr.linear()).scaled_value)), 4.0);
    for (int T : {2, 6, 10, 20}) {
      for (int tau : {0, 1, 2}) {
        if (tau >= T) continue;
        const auto est = sample_marquet_term(T, tau, snr, cfg.with_stream(1000 + 10 * T + tau));
        EXPECT_LE(std::abs(z_score(est, marquet_closed(T, tau, snr.linear()))), 4.0)
            << "db=" << db << " T=" << T << " tau=" << tau;
      }
    }
  }
}

}  // namespace
}  // namespace blockfade::mc
