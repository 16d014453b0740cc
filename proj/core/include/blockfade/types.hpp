#pragma once

#include <cmath>
#include <numbers>

namespace blockfade {

inline constexpr double kLog2E = std::numbers::log2e;
inline constexpr double kEulerGamma = std::numbers::egamma;
// One "3-dB unit" of power offset, i.e. 10*log10(2) dB.
inline constexpr double kDbPer3dBUnit = 3.0102999566398119521;

// Signal-to-noise ratio, stored linear.
class SnrValue {
 public:
  static SnrValue from_linear(double linear);
  static SnrValue from_db(double db);

  double linear() const { return linear_; }
  double db() const { return 10.0 * std::log10(linear_); }

 private:
  explicit SnrValue(double linear) : linear_(linear) {}
  double linear_;
};

// Scalar block-fading configuration: T symbols per block, tau of them pilots.
struct SisoParams {
  int T = 2;
  int tau = 1;
  SnrValue snr = SnrValue::from_linear(1.0);

  // Throws DomainError unless T >= 2 and 0 <= tau < T.
  void validate() const;
};

// MIMO configuration. Bounds require tau == 0 or n_t <= tau < T.
struct MimoParams {
  int n_t = 1;
  int n_r = 1;
  int T = 2;
  int tau = 1;
  SnrValue snr = SnrValue::from_linear(1.0);

  void validate() const;
};

// Horizontal offset between high-SNR asymptotes, in 3-dB units and dB.
struct PowerOffset {
  double units = 0.0;
  double db = 0.0;

  static PowerOffset from_units(double units) {
    return PowerOffset{units, units * kDbPer3dBUnit};
  }
  static PowerOffset from_db(double db) {
    return PowerOffset{db / kDbPer3dBUnit, db};
  }
};

}  // namespace blockfade
