#pragma once

#include <span>
#include <vector>

#include "blockfade/mc_oracle.hpp"
#include "blockfade/types.hpp"

// MIMO counterparts of the SISO bounds. C_{t,r}(rho) = E[log2 det(I + (rho/t) Z Z^H)]
// is exact when min(t, r) = 1 and Monte Carlo otherwise. The pilot matrix always
// satisfies P P^H = tau I.
namespace blockfade::mimo {

using mc::Estimate;
using mc::McConfig;

// Margin, in combined standard errors, inside which sampled values count as tied.
inline constexpr double kTieMarginSe = 4.0;

Estimate capacity_ctr(int t, int r, SnrValue rho, const McConfig& cfg);

// (1 - tau/T) C_{nT,nR}(snr) - (nR/T) C_{nT,T-tau}(snr / (1 + snr tau/nT)).
Estimate mimo_joint_j1(const MimoParams& p, const McConfig& cfg);

// (1 - tau/T) C_{nT,nR}(snr) - (nT nR/T) log2((1 + snr T/nT)/(1 + snr tau/nT)).
Estimate mimo_joint_j2(const MimoParams& p, const McConfig& cfg);

// I_J2 / n for n_t = n_r = n, written as the SISO expression at blocklength T/n,
// pilots tau/n, and capacity C_{n,n}/n.
double per_antenna_j2(int n, int T, int tau, SnrValue snr, double c_nn);

struct MimoSeparateResult {
  Estimate value;
  int tau_star = 0;
  bool tie_flagged = false;  // a smaller tau lay within the tie margin of the best
};

// max over n_t <= tau < T of (1 - tau/T) C_{nT,nR}(snr_eff(tau/n_t)).
MimoSeparateResult mimo_separate(int n_t, int n_r, int T, SnrValue snr, const McConfig& cfg);

struct PilotCandidate {
  int tau = 0;
  Estimate value;
};

struct MimoPilotOptimum {
  int tau_star = 0;
  Estimate value;
  double continuous_tau_star = 0.0;  // n * (log2(e)/(C_{n,n}/n) - 1/snr)
  bool tie_flagged = false;
  std::vector<PilotCandidate> candidates;
};

// Search of mimo_joint_j1 over tau in {0} U [n, T-1] for n_t = n_r = n.
MimoPilotOptimum mimo_optimize_pilots(int n, int T, SnrValue snr, const McConfig& cfg);

// SISO asymptotic advantage at effective blocklength T/n. T > n.
PowerOffset mimo_power_advantage_asymptotic(int n, int T);

struct GramCheckRow {
  std::vector<double> diagonal;
  Estimate delta;
  double difference = 0.0;  // delta - delta_uniform, same draws
  double difference_std_error = 0.0;
  bool uniform_not_larger = true;  // difference >= -kTieMarginSe * se
};

struct GramCheckReport {
  Estimate uniform;
  std::vector<GramCheckRow> rows;
  bool uniform_minimal = true;
};

// Compares the penalty term at P P^H = tau I against other diagonal pilot Grams.
GramCheckReport pilot_gram_optimality_check(const MimoParams& p, std::span<const std::vector<double>> perturbations,
                                            const McConfig& cfg);

}  // namespace blockfade::mimo
