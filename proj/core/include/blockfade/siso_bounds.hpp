#pragma once

#include "blockfade/types.hpp"

// Spectral efficiency of a pilot-assisted scalar Rayleigh block-fading channel,
// all in bits/s/Hz:
//   - C: ergodic capacity with perfect receiver CSI,
//   - I_S: pilots-only MMSE channel estimate, then decode as if it were exact,
//   - I_J1 >= I_J2: lower bounds on joint processing of pilot and data observations,
// plus pilot-count optimization and high-SNR power offsets between them.
namespace blockfade::siso {

// C(snr) = log2(e) e^{1/snr} E_1(1/snr).
double capacity_csi(SnrValue snr);

// Variance of the pilot-based MMSE channel estimate error, 1/(1 + snr tau). tau >= 1.
double mmse_estimate_variance(int tau, SnrValue snr);

// Post-estimation SNR snr(1 - mmse)/(1 + snr mmse). tau >= 1.
SnrValue snr_effective(int tau, SnrValue snr);
// Same for a real-valued (per-antenna) pilot count tau_bar > 0.
double snr_effective_linear(double tau_bar, double snr);

struct SeparateResult {
  double value = 0.0;
  int tau_star = 1;
};

// I_S = max over 1 <= tau < T of (1 - tau/T) C(snr_eff(tau)). Smallest maximizer on ties.
SeparateResult separate_bound(int T, SnrValue snr);

double joint_bound_j1(const SisoParams& p);
double joint_bound_j2(const SisoParams& p);

// The I_J2 expression with real-valued blocklength and pilot count and an
// arbitrary capacity term; joint_bound_j2 is the integer special case.
double joint_j2_formula(double T, double tau, double capacity, double snr);

enum class JointBound { j1, j2 };

struct PilotOptimum {
  int tau_star = 0;
  double value = 0.0;
  double continuous_tau_star = 0.0;  // reported only, never the answer
};

// Exhaustive search over 0 <= tau < T; smallest maximizer on ties.
PilotOptimum optimize_pilots_joint(int T, SnrValue snr, JointBound which);

// log2(e)/C - 1/snr, the maximizer of the relaxed I_J2 problem.
double continuous_pilot_optimum(SnrValue snr);

// High-SNR penalties from C inside the (T-1)/T bracket, tau = 1, 3-dB units.
double asymptote_j1(int T);
double asymptote_j2(int T);
inline constexpr double kAsymptoteSeparate = 1.0;

// 1 - log2(T)/(T-1); real T > 1 allowed so the MIMO T/n form can reuse it.
PowerOffset power_advantage_asymptotic(double T);
PowerOffset power_advantage_asymptotic(int T);

// dB shift d such that I_S(T, snr 10^{d/10}) = I_J2(T, tau=1, snr), by bisection
// on [-60, 60] dB to 1e-6 dB. Negative when separate processing wins.
PowerOffset power_advantage_at_snr(int T, SnrValue snr);
inline constexpr double kAdvantageSearchLimitDb = 60.0;
inline constexpr double kAdvantageToleranceDb = 1e-6;

// High-SNR gain of tau = 1 over tau = 0: gamma log2(e) / T.
PowerOffset single_pilot_advantage(int T);

struct TrueCapacityGap {
  // Penalty of the noncoherent capacity asymptote relative to C.
  PowerOffset exact_penalty;
  PowerOffset stirling_penalty;  // 0.5 log2(T)/(T-1)
  // asymptote_j2 minus the penalty: how far I_J2 sits from true capacity.
  PowerOffset gap_exact;
  PowerOffset gap_stirling;
};
TrueCapacityGap true_capacity_gap(int T);

// |I_J1 - second-order small-SNR expansion|. snr <= 0.01.
double low_power_expansion_check(const SisoParams& p);
inline constexpr double kLowPowerMaxSnr = 0.01;

}  // namespace blockfade::siso
