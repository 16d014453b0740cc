#include "blockfade/analysis_sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "blockfade/errors.hpp"
#include "blockfade/siso_bounds.hpp"
#include "test_support.hpp"

namespace blockfade::analysis {
namespace {

TEST(Grids, Defaults) {
  EXPECT_EQ(default_fig1_grid(), (std::vector<int>{2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128}));
  const auto g2 = default_fig2_grid();
  EXPECT_EQ(g2.front(), 2);
  EXPECT_EQ(g2.back(), 100);
  EXPECT_TRUE(std::is_sorted(g2.begin(), g2.end()));
  EXPECT_EQ(std::adjacent_find(g2.begin(), g2.end()), g2.end());
}

TEST(Grids, LogSpacedIntegers) {
  const auto g = log_spaced_integers(10, 10000, 5);
  EXPECT_EQ(g.front(), 10);
  EXPECT_EQ(g.back(), 10000);
  EXPECT_EQ(std::adjacent_find(g.begin(), g.end()), g.end());
  EXPECT_GE(g.size(), 14u);
  EXPECT_THROW(log_spaced_integers(0, 10, 3), DomainError);
  EXPECT_THROW(log_spaced_integers(10, 5, 3), DomainError);
}

TEST(Table, ColumnLookup) {
  const Table t = sweep_fig1(std::vector<int>{4, 8}, std::vector<double>{10.0});
  EXPECT_EQ(t.column_index("C"), 2u);
  EXPECT_THROW(t.column_index("nope"), DomainError);
}

TEST(SweepFig1, LayoutAndValues) {
  const std::vector<int> T{2, 10, 128};
  const std::vector<double> snr{0.0, 10.0};
  const Table t = sweep_fig1(T, snr);
  ASSERT_EQ(t.rows.size(), 6u);
  ASSERT_EQ(t.columns.size(), 6u);
  EXPECT_EQ(t.columns[0].name, "snr_db");
  EXPECT_EQ(t.columns[1].name, "T");
  EXPECT_EQ(t.at(0, "snr_db"), 0.0);
  EXPECT_EQ(t.at(3, "snr_db"), 10.0);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_NEAR(t.at(i, "C"), 2.9065148084, 1e-9);
  EXPECT_NEAR(t.at(1, "I_J1"), 0.5336747154, 1e-9);
  const auto s = siso::separate_bound(10, SnrValue::from_db(0.0));
  EXPECT_EQ(t.at(1, "I_S"), s.value);
  EXPECT_EQ(t.at(1, "tau_S"), s.tau_star);
  EXPECT_THROW(sweep_fig1(std::vector<int>{1, 4}, snr), DomainError);
}

TEST(SweepFig1, OrderingOnDefaultGrid) {
  const auto grid = default_fig1_grid();
  const Table t = sweep_fig1(grid, std::vector<double>{0.0, 10.0});
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int T = static_cast<int>(t.at(i, "T"));
    const double c = t.at(i, "C"), is = t.at(i, "I_S"), j1 = t.at(i, "I_J1");
    const double j2 = siso::joint_bound_j2(SisoParams{T, 1, SnrValue::from_db(t.at(i, "snr_db"))});
    EXPECT_LE(j1, c);
    EXPECT_LE(j2, j1);
    // T = 2 is the one blocklength where separate processing comes out ahead.
    if (T >= 3) {
      EXPECT_LE(is, j1) << "row " << i;
    } else {
      EXPECT_GT(is, j1);
    }
  }
}

TEST(SweepFig1, JointGapShrinksLikeLogTOverT) {
  const auto grid = default_fig1_grid();
  const Table t = sweep_fig1(grid, std::vector<double>{10.0});
  double prev_gap = INFINITY;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double T = t.at(i, "T");
    const double gap = t.at(i, "C") - t.at(i, "I_J1");
    EXPECT_LT(gap, prev_gap);
    EXPECT_LT(gap * T / std::log2(T), 2.0 * t.at(i, "C"));
    prev_gap = gap;
  }
}

TEST(SweepFig2, ShapeOnDefaultGrid) {
  const auto grid = default_fig2_grid();
  const Table t = sweep_fig2(grid, std::vector<double>{10.0, 20.0});
  ASSERT_EQ(t.columns.size(), 4u);
  EXPECT_EQ(t.columns[2].name, "at_10dB_db");
  EXPECT_EQ(t.columns[3].name, "at_20dB_db");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_LE(t.at(i, "at_10dB_db"), t.at(i, "at_20dB_db")) << t.at(i, "T");
    EXPECT_LE(t.at(i, "at_20dB_db"), t.at(i, "asymptotic_db")) << t.at(i, "T");
  }
  EXPECT_EQ(t.at(0, "asymptotic_db"), 0.0);
  const auto it = std::find(grid.begin(), grid.end(), 10);
  ASSERT_NE(it, grid.end());
  EXPECT_NEAR(t.at(it - grid.begin(), "asymptotic_db"), 1.8991888455, 1e-9);
}

TEST(ConvergenceTable, RatesAndMonotonicity) {
  const auto grid = log_spaced_integers(10, 10000, 6);
  const Table t = convergence_table(grid, SnrValue::from_db(10.0));
  ASSERT_EQ(t.rows.size(), grid.size());
  double lo_j = INFINITY, hi_j = 0.0, lo_s = INFINITY, hi_s = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) {
      EXPECT_LT(t.at(i, "C_minus_I_S"), t.at(i - 1, "C_minus_I_S"));
      EXPECT_LT(t.at(i, "C_minus_I_J2"), t.at(i - 1, "C_minus_I_J2"));
    }
    if (t.at(i, "T") >= 1000) {
      const double j = t.at(i, "C_minus_I_J2_times_T_over_log2T");
      const double s = t.at(i, "C_minus_I_S_times_sqrtT");
      lo_j = std::min(lo_j, j), hi_j = std::max(hi_j, j);
      lo_s = std::min(lo_s, s), hi_s = std::max(hi_s, s);
    }
  }
  EXPECT_LE(hi_j / lo_j, 1.25);
  EXPECT_LE(hi_s / lo_s, 2.0);
  EXPECT_THROW(convergence_table(std::vector<int>{10, 20, 500}, SnrValue::from_db(10.0)), DomainError);
}

TEST(RunSweep, SisoBlocklengthSweep) {
  SweepSpec spec;
  spec.grid = {4, 8, 16};
  spec.curves = {Curve::capacity, Curve::separate, Curve::joint_j1, Curve::joint_j2, Curve::asymptotes};
  const Table t = run_sweep(spec);
  ASSERT_EQ(t.columns.size(), 6u);
  EXPECT_EQ(t.columns[0].name, "T");
  EXPECT_EQ(t.columns[5].name, "asymptote_J2");
  const SnrValue s = SnrValue::from_db(10.0);
  EXPECT_EQ(t.at(1, "I_J1"), siso::joint_bound_j1(SisoParams{8, 1, s}));
  EXPECT_EQ(t.at(2, "I_S"), siso::separate_bound(16, s).value);
  const double c = siso::capacity_csi(s);
  EXPECT_NEAR(t.at(0, "asymptote_J2"), 0.75 * (c - siso::asymptote_j2(4)), 1e-14);
}

TEST(RunSweep, SnrSweepAndMimoColumns) {
  SweepSpec spec;
  spec.variable = SweepVariable::snr_db;
  spec.grid = {0.0, 10.0};
  spec.T = 12;
  spec.tau = 2;
  spec.n_t = 2;
  spec.n_r = 2;
  spec.curves = {Curve::capacity, Curve::joint_j1};
  spec.mc = testing::config(5000);
  const Table t = run_sweep(spec);
  ASSERT_EQ(t.columns.size(), 5u);
  EXPECT_EQ(t.columns[0].name, "snr_db");
  EXPECT_EQ(t.columns[2].name, "C_se");
  EXPECT_GT(t.at(0, "C_se"), 0.0);
  EXPECT_LT(t.at(0, "I_J1"), t.at(0, "C"));
  EXPECT_LT(t.at(0, "C"), t.at(1, "C"));

  // Deterministic function of the spec.
  const Table again = run_sweep(spec);
  EXPECT_EQ(t.rows, again.rows);

  spec.curves = {Curve::asymptotes};
  EXPECT_THROW(run_sweep(spec), DomainError);
}

TEST(RunSweep, SpecValidation) {
  SweepSpec spec;
  spec.curves = {Curve::capacity};
  spec.grid = {4};
  EXPECT_THROW(spec.validate(), DomainError);
  spec.grid = {4, 4};
  EXPECT_THROW(spec.validate(), DomainError);
  spec.grid = {4, 3};
  EXPECT_THROW(spec.validate(), DomainError);
  spec.grid = {2.5, 4};
  EXPECT_THROW(spec.validate(), DomainError);
  spec.grid = {4, 8};
  spec.curves.clear();
  EXPECT_THROW(spec.validate(), DomainError);
}

TEST(ValidateAll, DefaultRunPasses) {
  mc::McConfig cfg;
  const auto report = validate_all(cfg);
  EXPECT_TRUE(report.pass);
  EXPECT_TRUE(report.failures().empty());
  EXPECT_LE(report.max_abs_z, kValidationZLimit);
  EXPECT_GT(report.max_abs_z, 0.0);
  EXPECT_EQ(report.seed, cfg.seed);
  EXPECT_EQ(report.scalar_samples, mc::kDefaultScalarSamples);
  EXPECT_EQ(report.matrix_samples, mc::kDefaultMatrixSamples);
  // capacity 4 + marquet 4*(3+3+3+3) + ctr 4*4 at minimum.
  EXPECT_GE(report.rows.size(), 4u + 48u + 16u);
  const auto has = [&](const std::string& check) {
    return std::any_of(report.rows.begin(), report.rows.end(), [&](const ValidationRow& r) { return r.check == check; });
  };
  for (const char* c : {"capacity", "marquet_term", "ctr_rank_one", "mimo_j1_single_antenna", "pilot_gram_uniform_minimal"}) {
    EXPECT_TRUE(has(c)) << c;
  }
}

TEST(ValidateAll, SeedChangeStillPasses) {
  mc::McConfig cfg;
  cfg.seed = 987654321;
  cfg.samples = 300'000;
  const auto report = validate_all(cfg);
  EXPECT_TRUE(report.pass) << report.max_abs_z;
}

TEST(ValidateAll, CorruptedClosedFormFails) {
  mc::McConfig cfg;
  cfg.samples = 100'000;
  ClosedForms forms = ClosedForms::defaults();
  const auto good = forms.capacity;
  forms.capacity = [good](SnrValue s) { return 1.01 * good(s); };
  const auto report = validate_all(cfg, forms);
  EXPECT_FALSE(report.pass);
  const auto failed = report.failures();
  ASSERT_FALSE(failed.empty());
  // The single-antenna MIMO check reuses the capacity closed form.
  bool capacity_flagged = false;
  for (const auto* row : failed) {
    EXPECT_TRUE(row->check == "capacity" || row->check == "mimo_j1_single_antenna") << row->check;
    capacity_flagged = capacity_flagged || row->check == "capacity";
  }
  EXPECT_TRUE(capacity_flagged);
}

TEST(ValidateAll, CorruptedMarquetTermFails) {
  mc::McConfig cfg;
  cfg.samples = 100'000;
  ClosedForms forms = ClosedForms::defaults();
  const auto good = forms.marquet_term;
  forms.marquet_term = [good](int T, int tau, SnrValue s) { return good(T, tau, s) + (T == 10 && tau == 2 ? 0.05 : 0.0); };
  const auto report = validate_all(cfg, forms);
  EXPECT_FALSE(report.pass);
  for (const auto* row : report.failures()) {
    EXPECT_TRUE(row->check == "marquet_term" || row->check == "mimo_j1_single_antenna") << row->check;
    EXPECT_NE(row->cell.find("T=10 tau=2"), std::string::npos) << row->cell;
  }
}

}  // namespace
}  // namespace blockfade::analysis
