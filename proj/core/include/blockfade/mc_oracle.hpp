#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blockfade/types.hpp"

// Seeded Monte Carlo estimators for the expectations behind every bound.
//
// Samples are split into fixed-size blocks. Block b draws from its own
// generator seeded by (seed, stream_id, b), and block statistics are merged in
// block order, so results are bit-identical for any worker count.
namespace blockfade::mc {

enum class SampleKind { scalar, matrix };

inline constexpr std::uint64_t kDefaultScalarSamples = 1'000'000;
inline constexpr std::uint64_t kDefaultMatrixSamples = 100'000;
inline constexpr std::uint64_t kMinSamples = 100;
inline constexpr std::uint64_t kBlockSize = 1 << 14;

struct McConfig {
  std::optional<std::uint64_t> samples;  // unset: default for the estimator kind
  std::uint64_t seed = 20090101;
  std::uint64_t stream_id = 0;
  unsigned threads = 0;  // 0: hardware concurrency; never affects results

  std::uint64_t resolved_samples(SampleKind kind) const;
  McConfig with_stream(std::uint64_t stream) const;
  // Independent child stream for a named sub-computation.
  McConfig substream(std::uint64_t tag) const;
  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
};

// Jointly sampled quantities (common random numbers), with their covariance.
struct VectorEstimate {
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major, sample covariance / 1 (not / n)
  std::uint64_t samples_used = 0;

  std::size_t size() const { return mean.size(); }
  Estimate component(std::size_t i) const;
  // Standard error of mean[i] - mean[j].
  double difference_std_error(std::size_t i, std::size_t j) const;
};

// E[log2(1 + snr |H|^2)], |H|^2 ~ Exp(1).
Estimate sample_capacity_siso(SnrValue snr, const McConfig& cfg);

// E[log2(1 + snr S / (1 + snr tau))], S a sum of T - tau unit exponentials.
Estimate sample_marquet_term(int T, int tau, SnrValue snr, const McConfig& cfg);

// E[log2 det(I_r + (rho/t) Z Z^H)], Z r x t IID CN(0,1). Cholesky of the r x r Gram.
Estimate sample_ctr(int t, int r, SnrValue rho, const McConfig& cfg);

// Same draws as sample_ctr, evaluated through the t x t Gram Z^H Z.
Estimate sample_ctr_transposed(int t, int r, SnrValue rho, const McConfig& cfg);

// C_{t,r} at several rho on shared draws (eigenvalues of the smaller Gram).
VectorEstimate sample_ctr_multi(int t, int r, std::span<const double> rhos, const McConfig& cfg);

// C_{t,r_i}(rho_i) on shared draws: one r_max x t matrix per sample, where the
// i-th value uses its first r_i rows.
VectorEstimate sample_ctr_nested(int t, std::span<const int> rs, std::span<const double> rhos,
                                 const McConfig& cfg);

// n_R E[log2 det(I + (I + g D)^{-1} g X X^H)], g = SNR/n_T, D = diag(pilot Gram),
// X n_T x (T - tau). Bits.
Estimate sample_delta_mimo(const MimoParams& params, std::span<const double> pilot_gram_diagonal,
                           const McConfig& cfg);

// sample_delta_mimo for several diagonals on shared draws.
VectorEstimate sample_delta_mimo_multi(const MimoParams& params,
                                       std::span<const std::vector<double>> diagonals,
                                       const McConfig& cfg);

}  // namespace blockfade::mc
