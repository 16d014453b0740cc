#pragma once

#include <vector>

// Exponential integrals E_k(x) = \int_1^\infty e^{-xt} t^{-k} dt and the
// overflow-safe scaled form eps_k(x) = e^x E_k(x).
//
// Every closed form in the library consumes only eps_k. The argument is
// typically tau + 1/SNR, so at low SNR it easily exceeds 700 and e^x on its
// own would overflow; the scaled routines never form e^x.
namespace blockfade::specfun {

struct ScaledExpIntResult {
  int order = 1;
  double argument = 0.0;
  double scaled_value = 0.0;  // e^x E_k(x)
};

// E_1(x), x > 0. Series below 1, continued fraction above.
double expint_e1(double x);

// Unscaled E_k(x). Underflows to 0 for large x; exposed for tests only.
double expint_en(int k, double x);

// e^x E_k(x) for k >= 1, x > 0.
ScaledExpIntResult expint_scaled(int k, double x);

// eps_1(x), ..., eps_n(x) from one stable recurrence sweep.
std::vector<double> expint_scaled_sequence(int n, double x);

// sum_{k=1}^n e^x E_k(x).
double expint_scaled_sum(int n, double x);

// Reference value of e^x E_k(x) = \int_0^\infty e^{-xu} (1+u)^{-k} du by
// adaptive double-exponential quadrature. Slow; valid for 0 < x <= 50.
double expint_quadrature_oracle(int k, double x);

inline constexpr double kOracleMaxArgument = 50.0;

}  // namespace blockfade::specfun
