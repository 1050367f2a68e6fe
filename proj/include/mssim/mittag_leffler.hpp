/*
   Copyright 2026 The mssim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mssim/errors.hpp"
#include "mssim/quadrature.hpp"

namespace mssim {

namespace detail {

using WideFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<130>, boost::multiprecision::et_off>;

/// Decimal digits lost to cancellation in Σ z^k/Γ(βk+1): log10 of the
/// largest term.
inline double mittag_leffler_peak_digits(double beta, double z) {
  const double lz = std::log(std::abs(z));
  double peak = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double term = (k * lz - std::lgamma(beta * k + 1.0)) / std::log(10.0);
    peak = std::max(peak, term);
    if (term < peak - 20.0) break;
  }
  return peak;
}

}  // namespace detail

/// Power series Σ z^k / Γ(βk+1) summed in 130-digit floating point, which
/// absorbs the cancellation of the alternating terms for moderate |z|.
inline double mittag_leffler_series(double beta, double z) {
  using detail::WideFloat;
  const WideFloat wz(z), wb(beta);
  WideFloat sum = 0, power = 1;
  const WideFloat negligible("1e-40");
  for (int k = 0; k < 200000; ++k) {
    const WideFloat term = power / boost::math::tgamma(wb * k + 1);
    sum += term;
    if (k > 2 && abs(term) < negligible &&
        k * std::log(std::abs(z) + 1e-300) < std::lgamma(beta * k + 1.0)) {
      break;
    }
    power *= wz;
  }
  return static_cast<double>(sum);
}

/// E_β(-x) = ∫_0^∞ e^{-r x^{1/β}} K_β(r) dr with the spectral density
/// K_β(r) = sin(βπ) r^{β-1} / (π (r^{2β} + 2 r^β cos(βπ) + 1)); the halves
/// r < 1 and r > 1 are mapped to [0,1] by r = v^{1/β} and r = w^{-1/β},
/// which leaves bounded smooth integrands. Valid for 0 < β < 1.
inline double mittag_leffler_integral(double beta, double z) {
  const double s = std::pow(-z, 1.0 / beta);
  const double c = std::cos(beta * std::numbers::pi);
  const double inv_beta = 1.0 / beta;
  const auto lower = [&](double v) {
    return std::exp(-s * std::pow(v, inv_beta)) / (1.0 + v * (2.0 * c + v));
  };
  const auto upper = [&](double w) {
    if (w <= 0.0) return 0.0;
    return std::exp(-s * std::pow(w, -inv_beta)) / (1.0 + w * (2.0 * c + w));
  };
  const double tol = 1e-13;
  const double sum = integrate(lower, 0.0, 1.0, tol) +
                     integrate(upper, 0.0, 1.0, tol);
  return std::sin(beta * std::numbers::pi) / (std::numbers::pi * beta) * sum;
}

/// One-parameter Mittag-Leffler function E_β(z) = Σ z^k / Γ(βk+1) for
/// β in (0,1], z <= 0.
///
/// |z| <= 5 uses the wide-precision series unless more than 100 digits would
/// cancel (small β), |z| > 5 the integral representation. β = 1 is exp(z).
inline double mittag_leffler(double beta, double z) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw DomainError("mittag_leffler requires beta in (0, 1]");
  }
  if (!(z <= 0.0) || !std::isfinite(z)) {
    throw DomainError("mittag_leffler requires finite z <= 0");
  }
  if (z == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(z);
  if (-z <= 5.0 && detail::mittag_leffler_peak_digits(beta, z) <= 100.0) {
    return mittag_leffler_series(beta, z);
  }
  return mittag_leffler_integral(beta, z);
}

}  // namespace mssim
