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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/density.hpp"
#include "subzero/parallel.hpp"
#include "subzero/random.hpp"
#include "subzero/similarity.hpp"

namespace subzero {

/// The neighborhood size chosen for a target coverage.
struct CoveragePlan {
  std::size_t n = 0;
  std::size_t s = 0;
  double gamma = 0.0;
  std::size_t k = 0;
  /// expected_coverage(n, s, k).
  double achieved = 0.0;
  /// True when k reached n-1 without meeting gamma.
  bool capped = false;
};

/// Which points of B(x, NND_k(x)) may cover x.
///
/// kExcludeSelf: only the k nearest other points. Its expectation over
/// uniform s-subsets is exactly expected_coverage(n, s, k).
/// kIncludeSelf: x also covers itself when selected. Its expectation is
/// expected_coverage(n, s, k + 1) for points in general position.
enum class BallMembership { kExcludeSelf, kIncludeSelf };

/// 1 - C(n-k, s) / C(n, s): the probability that a uniform s-subset of n
/// items hits a fixed set of k items.
///
/// Evaluated as 1 - prod_{j=0}^{k-1} (n-s-j)/(n-j). Exactly 1 once s > n-k.
inline double expected_coverage(std::size_t n, std::size_t s, std::size_t k) {
  if (n < 2) throw InputError("n must be >= 2");
  if (s < 1 || s > n) throw InputError("s must be in [1, n]");
  if (k < 1 || k > n - 1) throw InputError("k must be in [1, n-1]");
  if (s > n - k) return 1.0;
  double miss = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    miss *= static_cast<double>(n - s - j) / static_cast<double>(n - j);
  }
  return 1.0 - miss;
}

/// Slack when comparing a coverage against gamma. Exact hits such as
/// 1/5 >= 0.2 come out one ulp low from the running product.
inline constexpr double kCoverageTolerance = 1e-12;

/// Smallest k >= 1 with expected_coverage(n, s, k) >= gamma, up to
/// kCoverageTolerance.
///
/// Uses the same running product as expected_coverage, so the reported
/// coverage is bit-identical to a direct call at the returned k.
inline CoveragePlan find_k_for_coverage(std::size_t n, std::size_t s,
                                        double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InputError("gamma must be in (0, 1)");
  }
  if (n < 2 || s < 1) throw InputError("need n >= 2 and s >= 1");
  if (s >= n) throw InputError("coreset too large for coverage inversion");
  CoveragePlan plan{n, s, gamma, 0, 0.0, false};
  double miss = 1.0;
  for (std::size_t k = 1; k <= n - 1; ++k) {
    if (s > n - k) {
      miss = 0.0;
    } else {
      miss *= static_cast<double>(n - s - (k - 1)) /
              static_cast<double>(n - (k - 1));
    }
    plan.k = k;
    plan.achieved = s > n - k ? 1.0 : 1.0 - miss;
    if (plan.achieved >= gamma - kCoverageTolerance) return plan;
  }
  plan.capped = true;
  return plan;
}

namespace detail {

inline void check_selection(std::span<const std::size_t> selected,
                            std::size_t n) {
  if (selected.empty()) throw InputError("empty selection");
  for (auto j : selected) {
    if (j >= n) {
      throw InputError("selected row " + std::to_string(j) +
                       " out of range");
    }
  }
}

}  // namespace detail

/// Fraction of rows x whose ball B(x, radii[x]) contains a selected row.
inline double empirical_coverage(
    const DistanceMatrix& dist, const RadiusVector& radii,
    std::span<const std::size_t> selected,
    BallMembership membership = BallMembership::kExcludeSelf) {
  const std::size_t n = dist.size();
  if (radii.radii.size() != n) throw InputError("radius vector size mismatch");
  detail::check_selection(selected, n);
  std::vector<char> chosen(n, 0);
  for (auto j : selected) chosen[j] = 1;
  const bool self_counts = membership == BallMembership::kIncludeSelf;
  std::size_t covered = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (self_counts && chosen[x]) {
      ++covered;
      continue;
    }
    for (auto j : selected) {
      if (j != x && dist(x, j) <= radii.radii[x]) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(n);
}

inline double empirical_coverage(
    const DistanceMatrix& dist, std::span<const std::size_t> selected,
    std::size_t k, BallMembership membership = BallMembership::kExcludeSelf) {
  detail::check_selection(selected, dist.size());
  return empirical_coverage(dist, knn_radii(dist, k), selected, membership);
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the mean empirical coverage of uniform s-subsets.
///
/// The point cloud is n points uniform in [0,1]^dimension drawn from `seed`;
/// trial t draws its subset from mix_seed(seed, t), so the estimate is the
/// same for every worker count.
inline McEstimate mc_expected_coverage(
    std::size_t n, std::size_t s, std::size_t k, std::size_t trials,
    std::uint64_t seed, std::size_t dimension = 2,
    BallMembership membership = BallMembership::kExcludeSelf,
    std::size_t threads = 1) {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (n < 2 || s < 1 || s > n) throw InputError("need n >= 2, 1 <= s <= n");
  if (k < 1 || k > n - 1) throw InputError("k must be in [1, n-1]");
  if (dimension < 1) throw InputError("dimension must be >= 1");

  Rng cloud_rng(seed);
  Matrix cloud(n, dimension);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : cloud.row(i)) v = cloud_rng.uniform();
  }
  const auto dist = pairwise_distances(cloud);
  const auto radii = knn_radii(dist, k);

  // Rows able to cover x.
  std::vector<std::vector<std::size_t>> coverers(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool self = j == x;
      if (self && membership == BallMembership::kExcludeSelf) continue;
      if (self || dist(x, j) <= radii.radii[x]) coverers[x].push_back(j);
    }
  }

  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(mix_seed(seed, t));
    std::vector<char> chosen(n, 0);
    for (auto j : rng.sample(n, s)) chosen[j] = 1;
    std::size_t covered = 0;
    for (std::size_t x = 0; x < n; ++x) {
      for (auto j : coverers[x]) {
        if (chosen[j]) {
          ++covered;
          break;
        }
      }
    }
    values[t] = static_cast<double>(covered) / static_cast<double>(n);
  });

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var =
      trials > 1 ? sq / static_cast<double>(trials - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(trials))};
}

}  // namespace subzero
