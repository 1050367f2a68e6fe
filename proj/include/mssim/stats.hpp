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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mssim/errors.hpp"
#include "mssim/subordinator.hpp"

namespace mssim {

/// Monte Carlo estimate: sample mean and its standard error sd/sqrt(n).
struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

inline McEstimate estimate(std::span<const double> values) {
  if (values.size() < 2) {
    throw DegenerateSample("an estimate needs at least 2 samples");
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n), values.size()};
}

/// Estimator of E exp(-θ S) from samples of S.
inline McEstimate empirical_laplace(std::span<const double> samples,
                                    double theta) {
  if (samples.size() < 2) {
    throw DegenerateSample("empirical_laplace needs at least 2 samples");
  }
  if (!(theta >= 0.0)) throw DomainError("empirical_laplace requires theta >= 0");
  std::vector<double> terms(samples.size());
  std::transform(samples.begin(), samples.end(), terms.begin(),
                 [theta](double s) { return std::exp(-theta * s); });
  return estimate(terms);
}

/// Sup-distance between the empirical CDFs of two samples. Ties (also across
/// the samples) are stepped over together; +inf is a legitimate value.
inline double ks_two_sample(std::span<const double> xs,
                            std::span<const double> ys) {
  if (xs.empty() || ys.empty()) {
    throw DegenerateSample("ks_two_sample needs non-empty samples");
  }
  std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
  auto is_nan = [](double v) { return std::isnan(v); };
  if (std::any_of(a.begin(), a.end(), is_nan) ||
      std::any_of(b.begin(), b.end(), is_nan)) {
    throw DomainError("ks_two_sample got NaN");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m -
                             static_cast<double>(j) / n));
  }
  // once one sample is exhausted its ECDF is 1 and the gap only shrinks
  return d;
}

/// Asymptotic two-sample critical value c(α) sqrt((m+n)/(mn)), with the
/// tabulated c(0.01) = 1.63 and c(0.05) = 1.36.
inline double ks_critical_value(std::size_t m, std::size_t n,
                                double alpha = 0.01) {
  if (m == 0 || n == 0) throw DomainError("ks_critical_value needs m, n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("ks_critical_value alpha must be in (0, 1)");
  }
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  if (alpha == 0.01) c = 1.63;
  if (alpha == 0.05) c = 1.36;
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  return c * std::sqrt((md + nd) / (md * nd));
}

/// Sample Pearson correlation; zero variance on either side is an error.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DegenerateSample("pearson needs two equal-length samples (n >= 2)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw DegenerateSample("correlation undefined: zero-variance sample");
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Correlation of the increments of D over two windows (a,b] and (c,d]
/// across replicated paths; se is the null-hypothesis value 1/sqrt(n).
inline McEstimate increment_correlation(std::span<const JumpPath> paths,
                                        std::pair<double, double> first,
                                        std::pair<double, double> second) {
  if (paths.size() < 2) {
    throw DegenerateSample("increment_correlation needs at least 2 paths");
  }
  std::vector<double> u, v;
  u.reserve(paths.size());
  v.reserve(paths.size());
  for (const JumpPath& path : paths) {
    u.push_back(eval(path, first.second) - eval(path, first.first));
    v.push_back(eval(path, second.second) - eval(path, second.first));
  }
  const double n = static_cast<double>(paths.size());
  return {pearson(u, v), 1.0 / std::sqrt(n), paths.size()};
}

}  // namespace mssim
