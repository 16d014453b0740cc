#include "blockfade/analysis_sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "blockfade/errors.hpp"
#include "blockfade/mimo_bounds.hpp"
#include "blockfade/siso_bounds.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade::analysis {
namespace {

void check_T_grid(std::span<const int> grid) {
  if (grid.empty()) throw DomainError("blocklength grid is empty");
  for (int T : grid) {
    if (T < 2) throw DomainError("every blocklength in the grid must be >= 2, got " + std::to_string(T));
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_name(double snr_db, int T, int tau) {
  return "snr_db=" + format_number(snr_db) + " T=" + std::to_string(T) + " tau=" + std::to_string(tau);
}

const char* curve_name(Curve c) {
  switch (c) {
    case Curve::capacity: return "C";
    case Curve::separate: return "I_S";
    case Curve::joint_j1: return "I_J1";
    case Curve::joint_j2: return "I_J2";
    case Curve::asymptotes: return "asymptote_J2";
  }
  return "?";
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw DomainError("no column named " + name);
}

std::vector<const ValidationRow*> ValidationReport::failures() const {
  std::vector<const ValidationRow*> out;
  for (const auto& r : rows) {
    if (!r.pass) out.push_back(&r);
  }
  return out;
}

void SweepSpec::validate() const {
  if (grid.size() < 2) throw DomainError("sweep grid needs at least 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("sweep grid must be strictly increasing");
  }
  if (curves.empty()) throw DomainError("sweep needs at least one curve");
  if (variable == SweepVariable::blocklength) {
    for (double g : grid) {
      if (g < 2 || g != std::floor(g)) throw DomainError("blocklength grid values must be integers >= 2");
    }
  }
  mc.validate();
}

Table run_sweep(const SweepSpec& spec) {
  spec.validate();
  const bool siso = spec.n_t == 1 && spec.n_r == 1;
  Table table;
  table.columns.push_back({spec.variable == SweepVariable::blocklength ? "T" : "snr_db",
                           spec.variable == SweepVariable::blocklength ? Unit::integer : Unit::db});
  for (Curve c : spec.curves) {
    if (c == Curve::asymptotes && !siso) {
      throw DomainError("asymptote curves are only defined for SISO sweeps");
    }
    table.columns.push_back({curve_name(c), Unit::bits});
    if (!siso && c != Curve::asymptotes) table.columns.push_back({std::string(curve_name(c)) + "_se", Unit::bits});
  }

  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const double x = spec.grid[gi];
    const int T = spec.variable == SweepVariable::blocklength ? static_cast<int>(x) : spec.T;
    const SnrValue snr = SnrValue::from_db(spec.variable == SweepVariable::snr_db ? x : spec.snr_db);
    const mc::McConfig cfg = spec.mc.substream(gi);
    std::vector<double> row{x};
    for (Curve c : spec.curves) {
      if (siso) {
        switch (c) {
          case Curve::capacity: row.push_back(siso::capacity_csi(snr)); break;
          case Curve::separate: row.push_back(siso::separate_bound(T, snr).value); break;
          case Curve::joint_j1: row.push_back(siso::joint_bound_j1({T, spec.tau, snr})); break;
          case Curve::joint_j2: row.push_back(siso::joint_bound_j2({T, spec.tau, snr})); break;
          case Curve::asymptotes:
            row.push_back((T - 1.0) / T * (siso::capacity_csi(snr) - siso::asymptote_j2(T)));
            break;
        }
        continue;
      }
      mc::Estimate e;
      const MimoParams p{spec.n_t, spec.n_r, T, spec.tau, snr};
      switch (c) {
        case Curve::capacity: e = mimo::capacity_ctr(spec.n_t, spec.n_r, snr, cfg); break;
        case Curve::separate: e = mimo::mimo_separate(spec.n_t, spec.n_r, T, snr, cfg).value; break;
        case Curve::joint_j1: e = mimo::mimo_joint_j1(p, cfg); break;
        case Curve::joint_j2: e = mimo::mimo_joint_j2(p, cfg); break;
        case Curve::asymptotes: break;
      }
      row.push_back(e.mean);
      row.push_back(e.std_error);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<int> default_fig1_grid() { return {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128}; }

std::vector<int> default_fig2_grid() { return log_spaced_integers(2, 100, 10); }

std::vector<int> log_spaced_integers(int lo, int hi, int points_per_decade) {
  if (lo < 1 || hi < lo || points_per_decade < 1) throw DomainError("invalid log-spaced grid request");
  const double decades = std::log10(static_cast<double>(hi) / lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const int v = static_cast<int>(std::lround(lo * std::pow(static_cast<double>(hi) / lo, i / (n - 1.0))));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

Table sweep_fig1(std::span<const int> T_grid, std::span<const double> snr_db_list) {
  check_T_grid(T_grid);
  Table t;
  t.columns = {{"snr_db", Unit::db}, {"T", Unit::integer}, {"C", Unit::bits},
               {"I_S", Unit::bits},  {"tau_S", Unit::integer}, {"I_J1", Unit::bits}};
  for (double db : snr_db_list) {
    const SnrValue snr = SnrValue::from_db(db);
    const double c = siso::capacity_csi(snr);
    for (int T : T_grid) {
      const auto sep = siso::separate_bound(T, snr);
      t.rows.push_back({db, static_cast<double>(T), c, sep.value, static_cast<double>(sep.tau_star),
                        siso::joint_bound_j1({T, 1, snr})});
    }
  }
  return t;
}

Table sweep_fig2(std::span<const int> T_grid, std::span<const double> snr_db_list) {
  check_T_grid(T_grid);
  Table t;
  t.columns = {{"T", Unit::integer}, {"asymptotic_db", Unit::db}};
  for (double db : snr_db_list) t.columns.push_back({"at_" + format_number(db) + "dB_db", Unit::db});
  for (int T : T_grid) {
    std::vector<double> row{static_cast<double>(T), siso::power_advantage_asymptotic(T).db};
    for (double db : snr_db_list) row.push_back(siso::power_advantage_at_snr(T, SnrValue::from_db(db)).db);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table convergence_table(std::span<const int> T_grid, SnrValue snr) {
  check_T_grid(T_grid);
  const auto [lo, hi] = std::minmax_element(T_grid.begin(), T_grid.end());
  if (static_cast<double>(*hi) < 100.0 * *lo) {
    throw DomainError("convergence grid must span at least two decades");
  }
  Table t;
  t.columns = {{"T", Unit::integer},
               {"C_minus_I_S", Unit::bits},
               {"C_minus_I_S_times_sqrtT", Unit::ratio},
               {"C_minus_I_J2", Unit::bits},
               {"C_minus_I_J2_times_T_over_log2T", Unit::ratio}};
  const double c = siso::capacity_csi(snr);
  for (int T : T_grid) {
    const double gap_s = c - siso::separate_bound(T, snr).value;
    const double gap_j = c - siso::joint_bound_j2({T, 1, snr});
    t.rows.push_back({static_cast<double>(T), gap_s, gap_s * std::sqrt(static_cast<double>(T)), gap_j,
                      gap_j * T / std::log2(static_cast<double>(T))});
  }
  return t;
}

ClosedForms ClosedForms::defaults() {
  ClosedForms f;
  f.capacity = [](SnrValue s) { return siso::capacity_csi(s); };
  f.marquet_term = [](int T, int tau, SnrValue s) {
    return kLog2E * specfun::expint_scaled_sum(T - tau, tau + 1.0 / s.linear());
  };
  f.ctr_rank_one = [](int t, int r, SnrValue rho) { return mimo::capacity_ctr(t, r, rho, {}).mean; };
  return f;
}

ValidationReport validate_all(const mc::McConfig& cfg, const ClosedForms& forms) {
  cfg.validate();
  ValidationReport report;
  report.seed = cfg.seed;
  report.scalar_samples = cfg.resolved_samples(mc::SampleKind::scalar);
  report.matrix_samples = cfg.resolved_samples(mc::SampleKind::matrix);
  std::uint64_t tag = 0;

  const auto add_two_sided = [&](std::string check, std::string cell, double closed, mc::Estimate e) {
    ValidationRow row{std::move(check), std::move(cell), closed, e.mean, e.std_error};
    row.z = e.std_error > 0.0 ? (e.mean - closed) / e.std_error : (e.mean == closed ? 0.0 : INFINITY);
    row.pass = std::abs(row.z) <= kValidationZLimit;
    report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  };

  const std::vector<double> snr_dbs{-10.0, 0.0, 10.0, 20.0};
  const std::vector<int> Ts{2, 6, 10, 20};
  const std::vector<int> taus{0, 1, 2};

  for (double db : snr_dbs) {
    const SnrValue snr = SnrValue::from_db(db);
    add_two_sided("capacity", "snr_db=" + format_number(db), forms.capacity(snr),
                  mc::sample_capacity_siso(snr, cfg.substream(tag++)));
  }

  for (double db : snr_dbs) {
    const SnrValue snr = SnrValue::from_db(db);
    for (int T : Ts) {
      for (int tau : taus) {
        if (tau >= T) continue;
        add_two_sided("marquet_term", cell_name(db, T, tau), forms.marquet_term(T, tau, snr),
                      mc::sample_marquet_term(T, tau, snr, cfg.substream(tag++)));
      }
    }
  }

  const std::vector<std::pair<int, int>> rank_one{{1, 2}, {1, 4}, {2, 1}, {4, 1}};
  for (double db : snr_dbs) {
    const SnrValue rho = SnrValue::from_db(db);
    for (auto [t, r] : rank_one) {
      add_two_sided("ctr_rank_one",
                    "snr_db=" + format_number(db) + " t=" + std::to_string(t) + " r=" + std::to_string(r),
                    forms.ctr_rank_one(t, r, rho), mc::sample_ctr(t, r, rho, cfg.substream(tag++)));
    }
  }

  // MIMO I_J1 at one antenna, with both C terms sampled, against the SISO closed form.
  for (double db : snr_dbs) {
    const SnrValue snr = SnrValue::from_db(db);
    for (int T : Ts) {
      for (int tau : taus) {
        if (tau >= T) continue;
        const double closed = (1.0 - static_cast<double>(tau) / T) * forms.capacity(snr) -
                              forms.marquet_term(T, tau, snr) / T;
        const mc::Estimate c = mc::sample_ctr_transposed(1, 1, snr, cfg.substream(tag++));
        const SnrValue rho = SnrValue::from_linear(snr.linear() / (1.0 + snr.linear() * tau));
        const mc::Estimate pen = mc::sample_ctr_transposed(1, T - tau, rho, cfg.substream(tag++));
        const double a = 1.0 - static_cast<double>(tau) / T;
        const mc::Estimate j1{a * c.mean - pen.mean / T,
                              std::sqrt(a * a * c.std_error * c.std_error + pen.std_error * pen.std_error / (T * T)),
                              c.samples_used};
        add_two_sided("mimo_j1_single_antenna", cell_name(db, T, tau), closed, j1);
      }
    }
  }

  // Uniform pilot Gram should minimize the penalty term.
  {
    const MimoParams p{2, 2, 10, 2, SnrValue::from_db(10.0)};
    const std::vector<std::vector<double>> perturbations{{2.5, 1.5}, {3.0, 1.0}, {4.0, 0.0}};
    const auto gram = mimo::pilot_gram_optimality_check(p, perturbations, cfg.substream(tag++));
    for (const auto& r : gram.rows) {
      ValidationRow row{"pilot_gram_uniform_minimal",
                        "n_t=2 n_r=2 T=10 tau=2 snr_db=10 diag=(" + format_number(r.diagonal[0]) + "," +
                            format_number(r.diagonal[1]) + ")",
                        gram.uniform.mean, r.delta.mean, r.difference_std_error};
      row.one_sided = true;
      row.z = r.difference_std_error > 0.0 ? std::max(0.0, -r.difference / r.difference_std_error)
                                           : (r.difference < 0.0 ? INFINITY : 0.0);
      row.pass = row.z <= kValidationZLimit;
      report.max_one_sided_z = std::max(report.max_one_sided_z, row.z);
      report.pass = report.pass && row.pass;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace blockfade::analysis
