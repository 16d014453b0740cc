#include "blockfade/types.hpp"

#include <string>

#include "blockfade/errors.hpp"

namespace blockfade {

SnrValue SnrValue::from_linear(double linear) {
  if (!std::isfinite(linear) || !(linear > 0.0)) {
    throw DomainError("SNR must be positive and finite, got " + std::to_string(linear));
  }
  return SnrValue(linear);
}

SnrValue SnrValue::from_db(double db) {
  if (!std::isfinite(db)) {
    throw DomainError("SNR in dB must be finite");
  }
  return from_linear(std::pow(10.0, db / 10.0));
}

void SisoParams::validate() const {
  if (T < 2) {
    throw DomainError("blocklength T must be >= 2, got " + std::to_string(T));
  }
  if (tau < 0 || tau >= T) {
    throw DomainError("pilot count tau must satisfy 0 <= tau < T, got tau=" +
                      std::to_string(tau) + " T=" + std::to_string(T));
  }
}

void MimoParams::validate() const {
  if (n_t < 1 || n_r < 1) {
    throw DomainError("antenna counts must be >= 1");
  }
  if (T < 2) {
    throw DomainError("blocklength T must be >= 2, got " + std::to_string(T));
  }
  if (tau < 0 || tau >= T) {
    throw DomainError("pilot count tau must satisfy 0 <= tau < T, got tau=" +
                      std::to_string(tau) + " T=" + std::to_string(T));
  }
  if (tau != 0 && tau < n_t) {
    throw DomainError("MIMO bounds need tau = 0 or tau >= n_t (one pilot per transmit antenna); got tau=" +
                      std::to_string(tau) + " n_t=" + std::to_string(n_t));
  }
}

}  // namespace blockfade
