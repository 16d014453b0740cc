#include "blockfade/mimo_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockfade/errors.hpp"
#include "blockfade/siso_bounds.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade::mimo {
namespace {

constexpr std::uint64_t kStreamCapacity = 1;
constexpr std::uint64_t kStreamPenalty = 2;

double combine(double a, double b) { return std::sqrt(a * a + b * b); }

double penalty_rho(const MimoParams& p) {
  const double s = p.snr.linear();
  return s / (1.0 + s * p.tau / p.n_t);
}

void check_square(int n) {
  if (n < 1) throw DomainError("antenna count must be >= 1, got " + std::to_string(n));
}

}  // namespace

Estimate capacity_ctr(int t, int r, SnrValue rho, const McConfig& cfg) {
  if (t < 1 || r < 1) {
    throw DomainError("C_{t,r} needs t >= 1 and r >= 1, got t=" + std::to_string(t) + " r=" + std::to_string(r));
  }
  if (std::min(t, r) == 1) {
    // Rank one: det = 1 + (rho/t)|z|^2 with |z|^2 ~ Gamma(max(t, r)).
    const double x = t / rho.linear();
    return Estimate{kLog2E * specfun::expint_scaled_sum(std::max(t, r), x), 0.0, 0};
  }
  if (t < r) {
    return mc::sample_ctr_transposed(t, r, rho, cfg);
  }
  return mc::sample_ctr(t, r, rho, cfg);
}

Estimate mimo_joint_j1(const MimoParams& p, const McConfig& cfg) {
  p.validate();
  const Estimate c = capacity_ctr(p.n_t, p.n_r, p.snr, cfg.substream(kStreamCapacity));
  const Estimate pen =
      capacity_ctr(p.n_t, p.T - p.tau, SnrValue::from_linear(penalty_rho(p)), cfg.substream(kStreamPenalty));
  const double a = 1.0 - static_cast<double>(p.tau) / p.T;
  const double b = static_cast<double>(p.n_r) / p.T;
  return Estimate{a * c.mean - b * pen.mean, combine(a * c.std_error, b * pen.std_error),
                  std::max(c.samples_used, pen.samples_used)};
}

Estimate mimo_joint_j2(const MimoParams& p, const McConfig& cfg) {
  p.validate();
  const Estimate c = capacity_ctr(p.n_t, p.n_r, p.snr, cfg.substream(kStreamCapacity));
  const double s = p.snr.linear();
  const double a = 1.0 - static_cast<double>(p.tau) / p.T;
  const double penalty = static_cast<double>(p.n_t) * p.n_r / p.T *
                         std::log2((1.0 + s * p.T / p.n_t) / (1.0 + s * p.tau / p.n_t));
  return Estimate{a * c.mean - penalty, a * c.std_error, c.samples_used};
}

double per_antenna_j2(int n, int T, int tau, SnrValue snr, double c_nn) {
  check_square(n);
  const double nn = n;
  return siso::joint_j2_formula(T / nn, tau / nn, c_nn / nn, snr.linear());
}

MimoSeparateResult mimo_separate(int n_t, int n_r, int T, SnrValue snr, const McConfig& cfg) {
  if (n_t < 1 || n_r < 1) throw DomainError("antenna counts must be >= 1");
  if (T < 2) throw DomainError("blocklength T must be >= 2, got " + std::to_string(T));
  if (T <= n_t) {
    throw DomainError("separate processing needs n_t <= tau < T pilots; T=" + std::to_string(T) +
                      " leaves no room for data with n_t=" + std::to_string(n_t));
  }
  std::vector<int> taus;
  std::vector<double> rhos;
  for (int tau = n_t; tau < T; ++tau) {
    taus.push_back(tau);
    rhos.push_back(siso::snr_effective_linear(static_cast<double>(tau) / n_t, snr.linear()));
  }

  std::vector<Estimate> cap(taus.size());
  mc::VectorEstimate joint;
  const bool rank_one = std::min(n_t, n_r) == 1;
  if (rank_one) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
      cap[i] = capacity_ctr(n_t, n_r, SnrValue::from_linear(rhos[i]), cfg);
    }
  } else {
    joint = mc::sample_ctr_multi(n_t, n_r, rhos, cfg.substream(kStreamCapacity));
    for (std::size_t i = 0; i < taus.size(); ++i) cap[i] = joint.component(i);
  }

  const auto weight = [&](std::size_t i) { return 1.0 - static_cast<double>(taus[i]) / T; };
  std::size_t best = 0;
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (weight(i) * cap[i].mean > weight(best) * cap[best].mean) best = i;
  }
  std::size_t chosen = best;
  if (!rank_one) {
    for (std::size_t i = 0; i < best; ++i) {
      // se of w_i C_i - w_b C_b on shared draws
      const std::size_t k = joint.size();
      const double wi = weight(i);
      const double wb = weight(best);
      const double var = wi * wi * joint.covariance[i * k + i] + wb * wb * joint.covariance[best * k + best] -
                         2.0 * wi * wb * joint.covariance[i * k + best];
      const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(joint.samples_used));
      if (wi * cap[i].mean >= wb * cap[best].mean - kTieMarginSe * se) {
        chosen = i;
        break;
      }
    }
  }
  MimoSeparateResult out;
  out.tau_star = taus[chosen];
  out.value = Estimate{weight(chosen) * cap[chosen].mean, weight(chosen) * cap[chosen].std_error,
                       cap[chosen].samples_used};
  out.tie_flagged = chosen != best;
  return out;
}

MimoPilotOptimum mimo_optimize_pilots(int n, int T, SnrValue snr, const McConfig& cfg) {
  check_square(n);
  if (T < 2 || T <= n) {
    throw DomainError("pilot optimization needs T > n, got T=" + std::to_string(T) + " n=" + std::to_string(n));
  }
  const double s = snr.linear();
  std::vector<int> taus{0};
  for (int tau = n; tau < T; ++tau) taus.push_back(tau);

  const Estimate c = capacity_ctr(n, n, snr, cfg.substream(kStreamCapacity));
  // Penalty terms C_{n,T-tau}(rho_tau) on nested draws so that differences
  // between candidates carry only the variation that matters.
  std::vector<int> rs;
  std::vector<double> rhos;
  for (int tau : taus) {
    rs.push_back(T - tau);
    rhos.push_back(s / (1.0 + s * tau / n));
  }
  std::vector<Estimate> pen(taus.size());
  mc::VectorEstimate nested;
  const bool exact = n == 1;
  if (exact) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
      pen[i] = capacity_ctr(n, rs[i], SnrValue::from_linear(rhos[i]), cfg);
    }
  } else {
    nested = mc::sample_ctr_nested(n, rs, rhos, cfg.substream(kStreamPenalty));
    for (std::size_t i = 0; i < taus.size(); ++i) pen[i] = nested.component(i);
  }

  const double b = static_cast<double>(n) / T;
  const auto weight = [&](std::size_t i) { return 1.0 - static_cast<double>(taus[i]) / T; };
  MimoPilotOptimum out;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double a = weight(i);
    out.candidates.push_back(
        {taus[i], Estimate{a * c.mean - b * pen[i].mean, combine(a * c.std_error, b * pen[i].std_error),
                           std::max(c.samples_used, pen[i].samples_used)}});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (out.candidates[i].value.mean > out.candidates[best].value.mean) best = i;
  }
  std::size_t chosen = best;
  if (!exact) {
    for (std::size_t i = 0; i < best; ++i) {
      const double dw = weight(i) - weight(best);
      const double se = combine(dw * c.std_error, b * nested.difference_std_error(i, best));
      if (out.candidates[i].value.mean >= out.candidates[best].value.mean - kTieMarginSe * se) {
        chosen = i;
        break;
      }
    }
  }
  out.tau_star = taus[chosen];
  out.value = out.candidates[chosen].value;
  out.tie_flagged = chosen != best;
  out.continuous_tau_star = n * (kLog2E / (c.mean / n) - 1.0 / s);
  return out;
}

PowerOffset mimo_power_advantage_asymptotic(int n, int T) {
  check_square(n);
  if (T <= n) {
    throw DomainError("MIMO power advantage needs T > n, got T=" + std::to_string(T) + " n=" + std::to_string(n));
  }
  return siso::power_advantage_asymptotic(static_cast<double>(T) / n);
}

GramCheckReport pilot_gram_optimality_check(const MimoParams& p, std::span<const std::vector<double>> perturbations,
                                            const McConfig& cfg) {
  p.validate();
  std::vector<std::vector<double>> diagonals;
  diagonals.emplace_back(static_cast<std::size_t>(p.n_t), static_cast<double>(p.tau));
  for (const auto& d : perturbations) diagonals.push_back(d);

  const mc::VectorEstimate v = mc::sample_delta_mimo_multi(p, diagonals, cfg);
  GramCheckReport report;
  report.uniform = v.component(0);
  for (std::size_t i = 1; i < diagonals.size(); ++i) {
    GramCheckRow row;
    row.diagonal = diagonals[i];
    row.delta = v.component(i);
    row.difference = v.mean[i] - v.mean[0];
    row.difference_std_error = v.difference_std_error(i, 0);
    row.uniform_not_larger = row.difference >= -kTieMarginSe * row.difference_std_error;
    report.uniform_minimal = report.uniform_minimal && row.uniform_not_larger;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace blockfade::mimo
