#include "blockfade/siso_bounds.hpp"

#include <cmath>
#include <string>

#include "blockfade/errors.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade::siso {
namespace {

void check_blocklength(int T) {
  if (T < 2) {
    throw DomainError("blocklength T must be >= 2, got " + std::to_string(T));
  }
}

void check_pilots(int tau) {
  if (tau < 1) {
    throw DomainError("pilot-based estimate needs tau >= 1, got " + std::to_string(tau));
  }
}

double separate_value(int T, int tau, double snr) {
  const double eff = snr_effective_linear(tau, snr);
  return (1.0 - static_cast<double>(tau) / T) * capacity_csi(SnrValue::from_linear(eff));
}

double separate_max(int T, double snr, int* tau_star) {
  double best = -1.0;
  int best_tau = 1;
  for (int tau = 1; tau < T; ++tau) {
    const double v = separate_value(T, tau, snr);
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  }
  if (tau_star) *tau_star = best_tau;
  return best;
}

}  // namespace

double capacity_csi(SnrValue snr) {
  return kLog2E * specfun::expint_scaled(1, 1.0 / snr.linear()).scaled_value;
}

double mmse_estimate_variance(int tau, SnrValue snr) {
  check_pilots(tau);
  return 1.0 / (1.0 + snr.linear() * tau);
}

double snr_effective_linear(double tau_bar, double snr) {
  if (!(tau_bar > 0.0)) {
    throw DomainError("effective SNR needs a positive pilot count");
  }
  const double mmse = 1.0 / (1.0 + snr * tau_bar);
  return snr * (1.0 - mmse) / (1.0 + snr * mmse);
}

SnrValue snr_effective(int tau, SnrValue snr) {
  check_pilots(tau);
  return SnrValue::from_linear(snr_effective_linear(tau, snr.linear()));
}

SeparateResult separate_bound(int T, SnrValue snr) {
  check_blocklength(T);
  SeparateResult out;
  out.value = separate_max(T, snr.linear(), &out.tau_star);
  return out;
}

double joint_bound_j1(const SisoParams& p) {
  p.validate();
  const double s = p.snr.linear();
  const double sum = specfun::expint_scaled_sum(p.T - p.tau, p.tau + 1.0 / s);
  return (1.0 - static_cast<double>(p.tau) / p.T) * capacity_csi(p.snr) - kLog2E / p.T * sum;
}

double joint_j2_formula(double T, double tau, double capacity, double snr) {
  return (1.0 - tau / T) * capacity - std::log2((1.0 + snr * T) / (1.0 + snr * tau)) / T;
}

double joint_bound_j2(const SisoParams& p) {
  p.validate();
  return joint_j2_formula(p.T, p.tau, capacity_csi(p.snr), p.snr.linear());
}

double continuous_pilot_optimum(SnrValue snr) {
  return kLog2E / capacity_csi(snr) - 1.0 / snr.linear();
}

PilotOptimum optimize_pilots_joint(int T, SnrValue snr, JointBound which) {
  check_blocklength(T);
  PilotOptimum out;
  bool first = true;
  for (int tau = 0; tau < T; ++tau) {
    const SisoParams p{T, tau, snr};
    const double v = which == JointBound::j1 ? joint_bound_j1(p) : joint_bound_j2(p);
    if (first || v > out.value) {
      out.value = v;
      out.tau_star = tau;
      first = false;
    }
  }
  out.continuous_tau_star = continuous_pilot_optimum(snr);
  return out;
}

double asymptote_j1(int T) {
  check_blocklength(T);
  return kLog2E * specfun::expint_scaled_sum(T - 1, 1.0) / (T - 1);
}

double asymptote_j2(int T) {
  check_blocklength(T);
  return std::log2(static_cast<double>(T)) / (T - 1);
}

PowerOffset power_advantage_asymptotic(double T) {
  if (!(T > 1.0) || !std::isfinite(T)) {
    throw DomainError("asymptotic power advantage needs blocklength > 1, got " + std::to_string(T));
  }
  return PowerOffset::from_units(1.0 - std::log2(T) / (T - 1.0));
}

PowerOffset power_advantage_asymptotic(int T) {
  check_blocklength(T);
  return power_advantage_asymptotic(static_cast<double>(T));
}

PowerOffset power_advantage_at_snr(int T, SnrValue snr) {
  check_blocklength(T);
  const double target = joint_bound_j2(SisoParams{T, 1, snr});
  const auto gap = [&](double db) {
    return separate_max(T, snr.linear() * std::pow(10.0, db / 10.0), nullptr) - target;
  };
  double lo = -kAdvantageSearchLimitDb;
  double hi = kAdvantageSearchLimitDb;
  if (gap(hi) < 0.0) {
    throw SaturationError("separate processing cannot reach the joint bound within +60 dB (T=" +
                          std::to_string(T) + ")");
  }
  if (gap(lo) > 0.0) {
    throw SaturationError("separate processing exceeds the joint bound even at -60 dB (T=" + std::to_string(T) + ")");
  }
  // I_S is strictly increasing in SNR, so the root is unique.
  while (hi - lo > kAdvantageToleranceDb) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return PowerOffset::from_db(0.5 * (lo + hi));
}

PowerOffset single_pilot_advantage(int T) {
  check_blocklength(T);
  return PowerOffset::from_units(kEulerGamma * kLog2E / T);
}

TrueCapacityGap true_capacity_gap(int T) {
  check_blocklength(T);
  const double m = T - 1;
  // log2(e^{T-1} (T-1)! / T^{T-1}) / (T-1), factorial through lgamma.
  const double exact = (m * kLog2E + std::lgamma(static_cast<double>(T)) * kLog2E - m * std::log2(T)) / m;
  const double stirling = 0.5 * std::log2(T) / m;
  const double j2 = asymptote_j2(T);
  return TrueCapacityGap{PowerOffset::from_units(exact), PowerOffset::from_units(stirling),
                         PowerOffset::from_units(j2 - exact), PowerOffset::from_units(j2 - stirling)};
}

double low_power_expansion_check(const SisoParams& p) {
  p.validate();
  const double s = p.snr.linear();
  if (s > kLowPowerMaxSnr) {
    throw RangeError("low-power expansion check needs snr <= 0.01, got " + std::to_string(s));
  }
  const int data = p.T - p.tau;
  double weighted = 0.0;  // sum_{k=1}^{T-tau} (k + tau)
  for (int k = 1; k <= data; ++k) weighted += k + p.tau;
  const double expansion =
      kLog2E * (data * (s - s * s) - (data * s - weighted * s * s)) / p.T;
  return std::abs(joint_bound_j1(p) - expansion);
}

}  // namespace blockfade::siso
