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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/coverage.hpp"
#include "subzero/density.hpp"
#include "subzero/random.hpp"
#include "subzero/similarity.hpp"
#include "subzero/submodular.hpp"

namespace subzero {

namespace detail {

class PhaseClock {
 public:
  explicit PhaseClock(double& sink)
      : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~PhaseClock() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start_)
                 .count();
  }
  PhaseClock(const PhaseClock&) = delete;
  PhaseClock& operator=(const PhaseClock&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

/// Medoid first, then repeatedly the point farthest from its nearest center.
/// Ties go to the smallest index.
inline std::vector<std::size_t> farthest_first(const DistanceMatrix& dist,
                                               std::size_t budget) {
  const std::size_t n = dist.size();
  std::size_t medoid = 0;
  double best_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double v : dist.values.row(i)) sum += v;
    if (i == 0 || sum < best_sum) {
      best_sum = sum;
      medoid = i;
    }
  }
  std::vector<std::size_t> order{medoid};
  std::vector<double> nearest(dist.values.row(medoid).begin(),
                              dist.values.row(medoid).end());
  std::vector<char> chosen(n, 0);
  chosen[medoid] = 1;
  while (order.size() < budget) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      if (pick == n || nearest[i] > nearest[pick]) pick = i;
    }
    chosen[pick] = 1;
    order.push_back(pick);
    auto row = dist.values.row(pick);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], row[i]);
  }
  return order;
}

inline std::string class_name(std::int64_t label) {
  return "class " + std::to_string(label);
}

}  // namespace detail

/// Runs the configured method on one class. `rows` are the class embeddings
/// and `ids` their original dataset ids, both in ascending row order.
inline ClassResult select_class(const Matrix& rows,
                                std::span<const std::uint64_t> ids,
                                std::int64_t label, std::size_t class_id,
                                std::size_t budget,
                                const SelectionConfig& config,
                                PhaseTimings& timings) {
  const std::size_t n = rows.rows();
  const std::size_t threads = resolve_threads(config.threads);
  ClassResult out;
  out.label = label;
  out.n = n;
  out.budget = budget;

  std::optional<DistanceMatrix> dist;
  {
    detail::PhaseClock clock(timings.distances);
    dist = pairwise_distances(rows, threads, config.max_class_rows);
  }

  const bool invertible = n >= 3 && budget < n;
  if (config.method == Method::kSubZeroCore && !invertible) {
    throw InputError(detail::class_name(label) +
                     " too small for coverage inversion (n=" +
                     std::to_string(n) + ", budget=" + std::to_string(budget) +
                     "); need n >= 3 and budget < n");
  }

  std::optional<CoveragePlan> plan;
  std::optional<RadiusVector> radii;
  std::vector<double> weights(n, 1.0);
  if (invertible) {
    detail::PhaseClock clock(timings.density);
    plan = find_k_for_coverage(n, budget, config.gamma);
    radii = knn_radii(*dist, plan->k, threads);
    auto [stats, scores] = density_scores(*radii);
    out.k = plan->k;
    out.k_capped = plan->capped;
    out.expected_coverage = plan->achieved;
    out.mu = stats.mu;
    out.sigma = stats.sigma;
    if (config.method == Method::kSubZeroCore) weights = scores.scores;
  }

  std::optional<WeightedFLInstance> instance;
  {
    detail::PhaseClock clock(timings.similarity);
    auto sim = pairwise_similarities(rows, config.similarity, threads,
                                     config.max_class_rows);
    instance.emplace(std::move(sim.values), std::move(weights));
  }

  std::vector<std::size_t> order;
  {
    detail::PhaseClock clock(timings.selection);
    switch (config.method) {
      case Method::kSubZeroCore:
      case Method::kFacilityLocation: {
        auto trace = greedy_lazy(*instance, budget, threads);
        order = std::move(trace.order);
        out.objective = trace.objective;
        break;
      }
      case Method::kKCenterGreedy:
        order = detail::farthest_first(*dist, budget);
        break;
      case Method::kRandom: {
        Rng rng(mix_seed(config.seed, class_id));
        order = rng.sample(n, budget);
        std::sort(order.begin(), order.end());
        break;
      }
    }
    if (config.method == Method::kKCenterGreedy ||
        config.method == Method::kRandom) {
      out.objective = objective(*instance, order);
    }
  }

  if (radii) {
    detail::PhaseClock clock(timings.coverage);
    out.empirical_coverage = empirical_coverage(*dist, *radii, order);
  }
  out.selected_ids.reserve(order.size());
  for (auto r : order) out.selected_ids.push_back(ids[r]);
  return out;
}

/// Class-wise selection with the method named in `config`. Classes are
/// processed in ascending label order.
inline CoresetResult select(const EmbeddingSet& set,
                            const SelectionConfig& config) {
  config.validate();
  auto diags = validate_embeddings(set);
  if (!diags.empty()) throw InputError(diags.front().message);

  CoresetResult result;
  result.config = config;
  result.target_total =
      (1.0 - config.alpha) * static_cast<double>(set.size());
  for (const auto& view : class_views(set, config.alpha)) {
    Matrix rows = gather_rows(set.vectors, view.member_rows);
    std::vector<std::uint64_t> ids;
    ids.reserve(view.member_rows.size());
    for (auto r : view.member_rows) ids.push_back(set.ids[r]);
    result.classes.push_back(select_class(
        rows, ids, set.class_labels[view.class_id], view.class_id,
        view.budget, config, result.timings));
    result.total_selected += view.budget;
  }
  return result;
}

namespace detail {
inline CoresetResult select_with(const EmbeddingSet& set,
                                 SelectionConfig config, Method m) {
  config.method = m;
  return select(set, config);
}
}  // namespace detail

/// Density-weighted facility location with K from the coverage target.
inline CoresetResult select_subzerocore(const EmbeddingSet& set,
                                        const SelectionConfig& config) {
  return detail::select_with(set, config, Method::kSubZeroCore);
}

inline CoresetResult select_facility_location(const EmbeddingSet& set,
                                              const SelectionConfig& config) {
  return detail::select_with(set, config, Method::kFacilityLocation);
}

inline CoresetResult select_kcenter_greedy(const EmbeddingSet& set,
                                           const SelectionConfig& config) {
  return detail::select_with(set, config, Method::kKCenterGreedy);
}

inline CoresetResult select_random(const EmbeddingSet& set,
                                   const SelectionConfig& config) {
  return detail::select_with(set, config, Method::kRandom);
}

}  // namespace subzero
