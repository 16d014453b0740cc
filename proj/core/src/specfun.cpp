#include "blockfade/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "blockfade/errors.hpp"
#include "blockfade/types.hpp"

namespace blockfade::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

void check_argument(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw DomainError("exponential integral needs finite x > 0, got " + std::to_string(x));
  }
}

void check_order(int k) {
  if (k < 1) {
    throw DomainError("exponential integral order must be >= 1, got " + std::to_string(k));
  }
}

// E_1(x) = -gamma - ln x - sum_{n>=1} (-x)^n / (n n!), for 0 < x < 1.
double e1_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= -x / n;
    const double delta = -term / n;
    sum += delta;
    if (std::abs(delta) < std::abs(sum) * kEps) {
      break;
    }
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Modified Lentz evaluation of the continued fraction
//   e^x E_k(x) = 1/(x+k- 1*k/(x+k+2- 2(k+1)/(x+k+4- ...)))
// Converges quickly once x + k is not small; used for x >= 1.
double scaled_cf(int k, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + k;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double a = -static_cast<double>(i) * (k - 1 + i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h;
    }
  }
  throw InternalError("continued fraction for E_" + std::to_string(k) + "(" + std::to_string(x) +
                      ") did not converge");
}

double scaled_e1(double x) {
  if (x < 1.0) {
    return std::exp(x) * e1_series(x);
  }
  return scaled_cf(1, x);
}

}  // namespace

double expint_e1(double x) {
  check_argument(x);
  if (x < 1.0) {
    return e1_series(x);
  }
  return std::exp(-x) * scaled_cf(1, x);
}

double expint_en(int k, double x) {
  check_order(k);
  check_argument(x);
  if (k == 1) {
    return expint_e1(x);
  }
  return std::exp(-x) * expint_scaled(k, x).scaled_value;
}

ScaledExpIntResult expint_scaled(int k, double x) {
  check_order(k);
  check_argument(x);
  double value;
  if (x >= 1.0) {
    value = scaled_cf(k, x);
  } else {
    // Forward recurrence k eps_{k+1} = 1 - x eps_k damps errors by x/k < 1 here.
    value = scaled_e1(x);
    for (int j = 1; j < k; ++j) {
      value = (1.0 - x * value) / j;
    }
  }
  return ScaledExpIntResult{k, x, value};
}

std::vector<double> expint_scaled_sequence(int n, double x) {
  check_order(n);
  check_argument(x);
  std::vector<double> eps(static_cast<std::size_t>(n));

  // The forward recurrence amplifies errors by x/k per step and the backward
  // one by k/x. Anchor at the crossover order m ~ x, then sweep down below it
  // and up above it so every step is damped.
  const int m = static_cast<int>(std::clamp(std::floor(x), 1.0, static_cast<double>(n)));
  eps[m - 1] = (m == 1) ? scaled_e1(x) : scaled_cf(m, x);
  for (int k = m - 1; k >= 1; --k) {
    eps[k - 1] = (1.0 - k * eps[k]) / x;
  }
  for (int k = m; k < n; ++k) {
    eps[k] = (1.0 - x * eps[k - 1]) / k;
  }
  return eps;
}

double expint_scaled_sum(int n, double x) {
  const auto eps = expint_scaled_sequence(n, x);
  double sum = 0.0;
  for (double v : eps) {
    sum += v;
  }
  return sum;
}

double expint_quadrature_oracle(int k, double x) {
  check_order(k);
  check_argument(x);
  if (x > kOracleMaxArgument) {
    throw RangeError("quadrature oracle supports 0 < x <= 50, got " + std::to_string(x));
  }
  // Substituting u = v/x moves the exponential decay to unit scale:
  //   eps_k(x) = (1/x) \int_0^\infty e^{-v} (1 + v/x)^{-k} dv.
  boost::math::quadrature::exp_sinh<double> integrator;
  const auto f = [k, x](double v) { return std::exp(-v) * std::pow(1.0 + v / x, -k); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, 1e-15, &error, &l1);
  return value / x;
}

}  // namespace blockfade::specfun
