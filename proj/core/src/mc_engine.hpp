#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "blockfade/mc_oracle.hpp"

namespace blockfade::mc::detail {

// Generator for one block of one substream.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(block), hi(block)};
    engine_.seed(seq);
  }

  // Uniform on (0, 1].
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53; }

  // Exp(1) by inverse CDF.
  double exponential() { return -std::log(uniform_open()); }

  // Gamma(m, 1) as a sum of m unit exponentials, i.e. -log of a product of uniforms.
  double erlang(int m) {
    double acc = 0.0;
    double prod = 1.0;
    for (int i = 0; i < m; ++i) {
      prod *= uniform_open();
      if (prod < 0x1p-900) {
        acc -= std::log(prod);
        prod = 1.0;
      }
    }
    return acc - std::log(prod);
  }

  // CN(0, 1): real and imaginary parts N(0, 1/2). Polar Box-Muller.
  std::complex<double> complex_normal() {
    const double radius = std::sqrt(-std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform_open();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
  static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }
  std::mt19937_64 engine_;
};

// Running mean and co-moment matrix of a K-vector (Welford, merged with Chan's rule).
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t k) : k_(k), mean_(k, 0.0), comoment_(k * k, 0.0), delta_(k) {}

  void add(std::span<const double> x) {
    ++n_;
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < k_; ++i) {
      delta_[i] = x[i] - mean_[i];
      mean_[i] += delta_[i] * inv_n;
    }
    for (std::size_t i = 0; i < k_; ++i) {
      const double post = x[i] - mean_[i];
      for (std::size_t j = 0; j < k_; ++j) {
        comoment_[i * k_ + j] += post * delta_[j];
      }
    }
  }

  void merge(const MomentAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    for (std::size_t i = 0; i < k_; ++i) {
      delta_[i] = other.mean_[i] - mean_[i];
    }
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        comoment_[i * k_ + j] += other.comoment_[i * k_ + j] + delta_[i] * delta_[j] * na * nb / n;
      }
    }
    for (std::size_t i = 0; i < k_; ++i) {
      mean_[i] += delta_[i] * nb / n;
    }
    n_ += other.n_;
  }

  VectorEstimate finish() const {
    VectorEstimate out;
    out.mean = mean_;
    out.covariance.resize(k_ * k_);
    const double denom = n_ > 1 ? static_cast<double>(n_ - 1) : 1.0;
    for (std::size_t i = 0; i < k_ * k_; ++i) {
      out.covariance[i] = comoment_[i] / denom;
    }
    out.samples_used = n_;
    return out;
  }

 private:
  std::size_t k_;
  std::uint64_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> comoment_;
  std::vector<double> delta_;
};

inline unsigned worker_count(const McConfig& cfg, std::size_t blocks) {
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(blocks, 1)));
}

// Runs `samples` draws of a K-vector. make_sampler() builds one per-worker
// sampler exposing operator()(SubstreamRng&, std::span<double> out).
template <class MakeSampler>
VectorEstimate run_blocks(const McConfig& cfg, std::uint64_t samples, std::size_t k, MakeSampler&& make_sampler) {
  const std::size_t blocks = static_cast<std::size_t>((samples + kBlockSize - 1) / kBlockSize);
  std::vector<MomentAccumulator> partial(blocks, MomentAccumulator(k));
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    auto sampler = make_sampler();
    std::vector<double> x(k);
    for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      SubstreamRng rng(cfg.seed, cfg.stream_id, b);
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlockSize;
      const std::uint64_t count = std::min<std::uint64_t>(kBlockSize, samples - begin);
      for (std::uint64_t s = 0; s < count; ++s) {
        sampler(rng, std::span<double>(x));
        partial[b].add(x);
      }
    }
  };

  const unsigned workers = worker_count(cfg, blocks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  MomentAccumulator total(k);
  for (const auto& p : partial) {
    total.merge(p);
  }
  return total.finish();
}

}  // namespace blockfade::mc::detail
