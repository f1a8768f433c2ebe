// Copyright 2026 The SubZeroCore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/parallel.hpp"
#include "subzero/similarity.hpp"

namespace subzero {

/// radii[i] is the distance from row i to its k-th nearest other row.
struct RadiusVector {
  std::vector<double> radii;
  std::size_t k = 0;
};

struct DensityStats {
  double mu = 0.0;
  /// Population standard deviation.
  double sigma = 0.0;
};

struct DensityScores {
  std::vector<double> scores;
};

/// k-th smallest distance from each row to the other n-1 rows.
///
/// The row itself is excluded by index, not by distance, so a duplicate of
/// row i counts as a neighbor at distance 0.
inline RadiusVector knn_radii(const DistanceMatrix& dist, std::size_t k,
                              std::size_t threads = 1) {
  const std::size_t n = dist.size();
  if (k < 1 || k + 1 > n) {
    throw InputError("k must be in [1, n-1]; got k=" + std::to_string(k) +
                     " with n=" + std::to_string(n));
  }
  RadiusVector out{std::vector<double>(n), k};
  // Small k: one pass keeping the k smallest in a max-heap.
  const bool use_heap = k <= 64 && k * 8 <= n;
  parallel_for(n, threads, [&](std::size_t i) {
    auto row = dist.values.row(i);
    std::vector<double> kept;
    if (use_heap) {
      kept.reserve(k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (kept.size() < k) {
          kept.push_back(row[j]);
          std::push_heap(kept.begin(), kept.end());
        } else if (row[j] < kept.front()) {
          std::pop_heap(kept.begin(), kept.end());
          kept.back() = row[j];
          std::push_heap(kept.begin(), kept.end());
        }
      }
      out.radii[i] = kept.front();
      return;
    }
    kept.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) kept.push_back(row[j]);
    }
    std::nth_element(kept.begin(), kept.begin() + (k - 1), kept.end());
    out.radii[i] = kept[k - 1];
  });
  return out;
}

/// Number of rows j (including i) with dist(i, j) <= r.
inline std::size_t ball_count(const DistanceMatrix& dist, std::size_t i,
                              double r) {
  if (i >= dist.size()) throw InputError("row out of range");
  std::size_t count = 0;
  for (double v : dist.values.row(i)) count += v <= r ? 1 : 0;
  return count;
}

/// ln(count / Vol_d(r)) with Vol_d(r) = pi^(d/2) r^d / Gamma(d/2 + 1).
///
/// Returns +infinity when r == 0 (all neighbors coincide with the point).
inline double log_density(std::size_t count, double r, std::size_t d) {
  if (count < 1) throw InputError("count must be >= 1");
  if (d < 1) throw InputError("dimension must be >= 1");
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InputError("radius must be finite and >= 0");
  }
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  const double half_d = 0.5 * static_cast<double>(d);
  const double log_volume = half_d * std::log(std::numbers::pi) -
                            std::lgamma(half_d + 1.0) +
                            static_cast<double>(d) * std::log(r);
  return std::log(static_cast<double>(count)) - log_volume;
}

/// Mean and population standard deviation of the radii.
inline DensityStats density_stats(const RadiusVector& radii) {
  const auto& r = radii.radii;
  if (r.empty()) throw InputError("empty radius vector");
  const double n = static_cast<double>(r.size());
  double sum = 0.0;
  for (double v : r) sum += v;
  const double mu = sum / n;
  double sq = 0.0;
  for (double v : r) sq += (v - mu) * (v - mu);
  return {mu, std::sqrt(sq / n)};
}

/// Gaussian weights s_i = exp(-(r_i - mu)^2 / (2 sigma^2)).
///
/// When sigma < 1e-12 * max(mu, 1) every score is 1. Scores are floored at
/// the smallest normal double so a far outlier keeps a positive weight.
inline std::pair<DensityStats, DensityScores> density_scores(
    const RadiusVector& radii) {
  const DensityStats stats = density_stats(radii);
  DensityScores out{std::vector<double>(radii.radii.size(), 1.0)};
  if (stats.sigma < 1e-12 * std::max(stats.mu, 1.0)) return {stats, out};
  const double denom = 2.0 * stats.sigma * stats.sigma;
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    const double z = radii.radii[i] - stats.mu;
    out.scores[i] = std::max(std::exp(-(z * z) / denom),
                             std::numeric_limits<double>::min());
  }
  return {stats, out};
}

}  // namespace subzero
