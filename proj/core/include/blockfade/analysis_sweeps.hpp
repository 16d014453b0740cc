#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "blockfade/mc_oracle.hpp"
#include "blockfade/types.hpp"

namespace blockfade::analysis {

// Column unit; serializers pick decimals from it.
enum class Unit { integer, bits, db, three_db_units, ratio, z_score };

struct Column {
  std::string name;
  Unit unit = Unit::bits;
};

// Rows are emitted in grid order.
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;  // throws if absent
  double at(std::size_t row, const std::string& name) const { return rows.at(row).at(column_index(name)); }
};

enum class SweepVariable { blocklength, snr_db };
enum class Curve { capacity, separate, joint_j1, joint_j2, asymptotes };

struct SweepSpec {
  SweepVariable variable = SweepVariable::blocklength;
  std::vector<double> grid;  // strictly increasing, >= 2 points
  // Complementary fixed parameters; the swept one is ignored.
  int T = 10;
  int tau = 1;
  double snr_db = 10.0;
  int n_t = 1;
  int n_r = 1;
  std::vector<Curve> curves;
  mc::McConfig mc;

  void validate() const;
};

// One column per curve plus std-error columns for sampled (MIMO) curves.
Table run_sweep(const SweepSpec& spec);

std::vector<int> default_fig1_grid();
std::vector<int> default_fig2_grid();
// Log-spaced distinct integers in [lo, hi], endpoints included.
std::vector<int> log_spaced_integers(int lo, int hi, int points_per_decade);

// Per (snr, T): C, I_S with its tau*, and I_J1 at tau = 1.
Table sweep_fig1(std::span<const int> T_grid, std::span<const double> snr_db_list);

// Per T: asymptotic power advantage of joint over separate processing, and the
// finite-SNR advantage at each listed SNR, in dB.
Table sweep_fig2(std::span<const int> T_grid, std::span<const double> snr_db_list);

// Per T: C - I_S, (C - I_S) sqrt(T), C - I_J2 (tau = 1), (C - I_J2) T / log2 T.
// Grid must span at least two decades.
Table convergence_table(std::span<const int> T_grid, SnrValue snr);

struct ValidationRow {
  std::string check;
  std::string cell;
  double closed_form = 0.0;
  double sampled = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool one_sided = false;  // z > 0 means the sampled side is too small
  bool pass = true;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  double max_abs_z = 0.0;  // over two-sided rows
  double max_one_sided_z = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::uint64_t scalar_samples = 0;
  std::uint64_t matrix_samples = 0;

  std::vector<const ValidationRow*> failures() const;
};

inline constexpr double kValidationZLimit = 4.0;

// Closed forms used by validate_all; tests swap one out to check that the
// harness notices.
struct ClosedForms {
  std::function<double(SnrValue)> capacity;
  std::function<double(int T, int tau, SnrValue)> marquet_term;  // bits
  std::function<double(int t, int r, SnrValue)> ctr_rank_one;
  static ClosedForms defaults();
};

// Every closed form against its Monte Carlo oracle on the standard grid:
// SNR in {-10, 0, 10, 20} dB, T in {2, 6, 10, 20}, tau in {0, 1, 2}.
ValidationReport validate_all(const mc::McConfig& cfg, const ClosedForms& forms = ClosedForms::defaults());

}  // namespace blockfade::analysis
