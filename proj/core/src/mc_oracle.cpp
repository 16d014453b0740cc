#include "blockfade/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "blockfade/errors.hpp"
#include "mc_engine.hpp"

namespace blockfade::mc {
namespace {

using detail::SubstreamRng;
using Eigen::MatrixXcd;

Estimate scalar_estimate(const VectorEstimate& v) { return v.component(0); }

// log2 det of a Hermitian positive-definite matrix via Cholesky.
double log2_det_hpd(const MatrixXcd& m) {
  Eigen::LLT<MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw InternalError("Cholesky failed on a " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + " matrix that should be positive definite; diag(0)=" +
                        std::to_string(m(0, 0).real()));
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i).real());
  }
  return 2.0 * kLog2E * acc;
}

void fill_complex_normal(SubstreamRng& rng, MatrixXcd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      z(i, j) = rng.complex_normal();
    }
  }
}

void check_dims(int t, int r) {
  if (t < 1 || r < 1) {
    throw DomainError("C_{t,r} needs t >= 1 and r >= 1, got t=" + std::to_string(t) + " r=" + std::to_string(r));
  }
}

enum class GramSide { rows, cols };

Estimate ctr_estimate(int t, int r, SnrValue rho, const McConfig& cfg, GramSide side) {
  check_dims(t, r);
  cfg.validate();
  const double scale = rho.linear() / t;
  auto make = [=] {
    return [=, z = MatrixXcd(r, t), gram = MatrixXcd()](SubstreamRng& rng, std::span<double> out) mutable {
      fill_complex_normal(rng, z);
      if (side == GramSide::rows) {
        gram = MatrixXcd::Identity(r, r) + scale * (z * z.adjoint());
      } else {
        gram = MatrixXcd::Identity(t, t) + scale * (z.adjoint() * z);
      }
      out[0] = log2_det_hpd(gram);
    };
  };
  return scalar_estimate(detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::matrix), 1, make));
}

void check_delta_diagonal(const MimoParams& p, std::span<const double> diag) {
  if (diag.size() != static_cast<std::size_t>(p.n_t)) {
    throw DomainError("pilot Gram diagonal must have n_t=" + std::to_string(p.n_t) + " entries, got " +
                      std::to_string(diag.size()));
  }
  double trace = 0.0;
  for (double d : diag) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw DomainError("pilot Gram diagonal entries must be finite and non-negative");
    }
    trace += d;
  }
  const double budget = static_cast<double>(p.n_t) * p.tau;
  if (trace > budget * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("pilot power constraint Tr{P P^H} <= n_t*tau violated: trace=" + std::to_string(trace) +
                      " budget=" + std::to_string(budget));
  }
}

}  // namespace

std::uint64_t McConfig::resolved_samples(SampleKind kind) const {
  if (samples) return *samples;
  return kind == SampleKind::scalar ? kDefaultScalarSamples : kDefaultMatrixSamples;
}

McConfig McConfig::with_stream(std::uint64_t stream) const {
  McConfig out = *this;
  out.stream_id = stream;
  return out;
}

McConfig McConfig::substream(std::uint64_t tag) const {
  // SplitMix64 finalizer over (stream_id, tag).
  std::uint64_t z = stream_id + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return with_stream(z ^ (z >> 31));
}

void McConfig::validate() const {
  if (samples && *samples < kMinSamples) {
    throw DomainError("Monte Carlo sample count must be >= " + std::to_string(kMinSamples) + ", got " +
                      std::to_string(*samples));
  }
}

Estimate VectorEstimate::component(std::size_t i) const {
  const double var = covariance[i * size() + i];
  return Estimate{mean[i], std::sqrt(std::max(var, 0.0) / static_cast<double>(samples_used)), samples_used};
}

double VectorEstimate::difference_std_error(std::size_t i, std::size_t j) const {
  const std::size_t k = size();
  const double var = covariance[i * k + i] + covariance[j * k + j] - 2.0 * covariance[i * k + j];
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(samples_used));
}

Estimate sample_capacity_siso(SnrValue snr, const McConfig& cfg) {
  cfg.validate();
  const double s = snr.linear();
  auto make = [s] {
    return [s](SubstreamRng& rng, std::span<double> out) { out[0] = kLog2E * std::log1p(s * rng.exponential()); };
  };
  return scalar_estimate(detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::scalar), 1, make));
}

Estimate sample_marquet_term(int T, int tau, SnrValue snr, const McConfig& cfg) {
  if (tau < 0 || tau >= T) {
    throw DomainError("marquet term needs 0 <= tau < T, got tau=" + std::to_string(tau) + " T=" + std::to_string(T));
  }
  cfg.validate();
  const int data = T - tau;
  const double scale = snr.linear() / (1.0 + snr.linear() * tau);
  auto make = [=] {
    return [=](SubstreamRng& rng, std::span<double> out) { out[0] = kLog2E * std::log1p(scale * rng.erlang(data)); };
  };
  return scalar_estimate(detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::scalar), 1, make));
}

Estimate sample_ctr(int t, int r, SnrValue rho, const McConfig& cfg) {
  return ctr_estimate(t, r, rho, cfg, GramSide::rows);
}

Estimate sample_ctr_transposed(int t, int r, SnrValue rho, const McConfig& cfg) {
  return ctr_estimate(t, r, rho, cfg, GramSide::cols);
}

VectorEstimate sample_ctr_multi(int t, int r, std::span<const double> rhos, const McConfig& cfg) {
  check_dims(t, r);
  cfg.validate();
  if (rhos.empty()) {
    throw DomainError("sample_ctr_multi needs at least one rho");
  }
  std::vector<double> scales;
  for (double rho : rhos) {
    scales.push_back(SnrValue::from_linear(rho).linear() / t);
  }
  const int m = std::min(t, r);
  auto make = [=] {
    return [=, z = MatrixXcd(r, t), solver = Eigen::SelfAdjointEigenSolver<MatrixXcd>(m)](
               SubstreamRng& rng, std::span<double> out) mutable {
      fill_complex_normal(rng, z);
      const MatrixXcd gram = (r <= t) ? MatrixXcd(z * z.adjoint()) : MatrixXcd(z.adjoint() * z);
      solver.compute(gram, Eigen::EigenvaluesOnly);
      const auto& lambda = solver.eigenvalues();
      for (std::size_t j = 0; j < scales.size(); ++j) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
          acc += std::log1p(scales[j] * std::max(lambda(i), 0.0));
        }
        out[j] = kLog2E * acc;
      }
    };
  };
  return detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::matrix), scales.size(), make);
}

VectorEstimate sample_ctr_nested(int t, std::span<const int> rs, std::span<const double> rhos, const McConfig& cfg) {
  if (rs.size() != rhos.size() || rs.empty()) {
    throw DomainError("sample_ctr_nested needs matching, non-empty r and rho lists");
  }
  cfg.validate();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    check_dims(t, rs[i]);
    SnrValue::from_linear(rhos[i]);
  }
  // Visit outputs in increasing r while rows accumulate into the t x t Gram.
  std::vector<std::size_t> order(rs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rs[a] < rs[b]; });
  const int r_max = rs[order.back()];
  std::vector<int> r_of(rs.begin(), rs.end());
  std::vector<double> scale_of;
  for (double rho : rhos) scale_of.push_back(rho / t);

  auto make = [=] {
    return [=, row = Eigen::RowVectorXcd(t), gram = MatrixXcd(t, t)](SubstreamRng& rng,
                                                                     std::span<double> out) mutable {
      gram.setZero();
      std::size_t next = 0;
      for (int i = 1; i <= r_max; ++i) {
        for (int j = 0; j < t; ++j) row(j) = rng.complex_normal();
        gram.noalias() += row.adjoint() * row;
        while (next < order.size() && r_of[order[next]] == i) {
          const std::size_t idx = order[next++];
          out[idx] = log2_det_hpd(MatrixXcd::Identity(t, t) + scale_of[idx] * gram);
        }
      }
    };
  };
  return detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::matrix), rs.size(), make);
}

VectorEstimate sample_delta_mimo_multi(const MimoParams& params, std::span<const std::vector<double>> diagonals,
                                       const McConfig& cfg) {
  params.validate();
  cfg.validate();
  if (diagonals.empty()) {
    throw DomainError("sample_delta_mimo_multi needs at least one diagonal");
  }
  for (const auto& d : diagonals) check_delta_diagonal(params, d);

  const int nt = params.n_t;
  const int data = params.T - params.tau;
  const double g = params.snr.linear() / nt;
  const double nr = params.n_r;
  // M = I + K^{-1/2} g S K^{-1/2}, K = I + g D; same determinant as I + K^{-1} g S.
  std::vector<Eigen::VectorXd> weights;
  for (const auto& d : diagonals) {
    Eigen::VectorXd w(nt);
    for (int i = 0; i < nt; ++i) w(i) = std::sqrt(g / (1.0 + g * d[i]));
    weights.push_back(w);
  }

  auto make = [=] {
    return [=, x = MatrixXcd(nt, data), s = MatrixXcd(nt, nt), m = MatrixXcd(nt, nt)](SubstreamRng& rng, std::span<double> out) mutable {
      fill_complex_normal(rng, x);
      s.noalias() = x * x.adjoint();
      for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto& w = weights[k];
        for (int i = 0; i < nt; ++i) {
          for (int j = 0; j < nt; ++j) m(i, j) = w(i) * w(j) * s(i, j);
          m(i, i) += 1.0;
        }
        out[k] = nr * log2_det_hpd(m);
      }
    };
  };
  return detail::run_blocks(cfg, cfg.resolved_samples(SampleKind::matrix), diagonals.size(), make);
}

Estimate sample_delta_mimo(const MimoParams& params, std::span<const double> pilot_gram_diagonal,
                           const McConfig& cfg) {
  const std::vector<std::vector<double>> one{std::vector<double>(pilot_gram_diagonal.begin(), pilot_gram_diagonal.end())};
  return sample_delta_mimo_multi(params, one, cfg).component(0);
}

}  // namespace blockfade::mc
