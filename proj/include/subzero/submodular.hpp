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
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/parallel.hpp"
#include "subzero/similarity.hpp"

namespace subzero {

/// f(S) = sum_i max_{j in S} w_j * sim(i, j), with f({}) = 0.
///
/// All-ones weights give plain facility location.
class WeightedFLInstance {
 public:
  WeightedFLInstance(Matrix sim, std::vector<double> weights)
      : sim_(std::move(sim)), weights_(std::move(weights)) {
    if (sim_.rows() != sim_.cols()) {
      throw InputError("similarity matrix must be square");
    }
    if (weights_.size() != sim_.rows()) {
      throw InputError("weights length must equal n");
    }
    for (double w : weights_) {
      if (!(w > 0.0 && w <= 1.0)) throw InputError("weights must be in (0, 1]");
    }
  }

  /// Plain facility location over `sim`.
  static WeightedFLInstance facility_location(Matrix sim) {
    std::vector<double> ones(sim.rows(), 1.0);
    return {std::move(sim), std::move(ones)};
  }

  std::size_t size() const noexcept { return sim_.rows(); }
  const Matrix& sim() const noexcept { return sim_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// w_j * sim(i, j) for all i, read from the contiguous row j.
  double weighted(std::size_t i, std::size_t j) const noexcept {
    return weights_[j] * sim_(j, i);
  }

 private:
  Matrix sim_;
  std::vector<double> weights_;
};

struct GreedyTrace {
  std::vector<std::size_t> order;
  std::vector<double> gains;
  double objective = 0.0;
  /// Marginal-gain evaluations performed (not part of the trace identity).
  std::size_t evaluations = 0;
};

inline double objective(const WeightedFLInstance& inst,
                        std::span<const std::size_t> subset) {
  const std::size_t n = inst.size();
  for (auto j : subset) {
    if (j >= n) throw InputError("index " + std::to_string(j) + " out of range");
  }
  if (subset.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto j : subset) best = std::max(best, inst.weighted(i, j));
    total += best;
  }
  return total;
}

/// Per-point best weighted similarity to the current set, for O(n) gains.
class FacilityState {
 public:
  explicit FacilityState(const WeightedFLInstance& inst)
      : inst_(&inst), best_(inst.size(), 0.0), selected_(inst.size(), 0) {}

  bool contains(std::size_t j) const { return selected_[j] != 0; }
  std::size_t count() const noexcept { return count_; }

  /// f(S + j) - f(S), accumulated in ascending i.
  double gain(std::size_t j) const {
    const std::size_t n = inst_->size();
    double acc = 0.0;
    if (count_ == 0) {
      for (std::size_t i = 0; i < n; ++i) acc += inst_->weighted(i, j);
      return acc;
    }
    // max(v - best, 0) adds +0.0 exactly when v <= best.
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::max(inst_->weighted(i, j) - best_[i], 0.0);
    }
    return acc;
  }

  void add(std::size_t j) {
    const std::size_t n = inst_->size();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = inst_->weighted(i, j);
      best_[i] = count_ == 0 ? v : std::max(best_[i], v);
    }
    selected_[j] = 1;
    ++count_;
  }

 private:
  const WeightedFLInstance* inst_;
  std::vector<double> best_;
  std::vector<char> selected_;
  std::size_t count_ = 0;
};

inline double marginal_gain(const WeightedFLInstance& inst,
                            std::span<const std::size_t> subset,
                            std::size_t candidate) {
  const std::size_t n = inst.size();
  if (candidate >= n) throw InputError("candidate out of range");
  FacilityState state(inst);
  for (auto j : subset) {
    if (j >= n) throw InputError("index " + std::to_string(j) + " out of range");
    if (j == candidate) throw InputError("candidate already selected");
    if (!state.contains(j)) state.add(j);
  }
  return state.gain(candidate);
}

namespace detail {

inline void check_budget(const WeightedFLInstance& inst, std::size_t budget) {
  if (budget < 1 || budget > inst.size()) {
    throw InputError("budget must be in [1, n]; got " + std::to_string(budget));
  }
}

// Fresh gains for every unselected candidate; selected slots stay -inf.
inline std::vector<double> all_gains(const FacilityState& state,
                                     std::size_t n, std::size_t threads) {
  std::vector<double> gains(n, -std::numeric_limits<double>::infinity());
  parallel_for(n, threads, [&](std::size_t j) {
    if (!state.contains(j)) gains[j] = state.gain(j);
  });
  return gains;
}

// Largest gain, smallest index on ties.
inline std::size_t argmax(const std::vector<double>& gains,
                          const FacilityState& state) {
  std::size_t best = gains.size();
  for (std::size_t j = 0; j < gains.size(); ++j) {
    if (state.contains(j)) continue;
    if (best == gains.size() || gains[j] > gains[best]) best = j;
  }
  return best;
}

}  // namespace detail

/// Re-evaluates every candidate at every step.
inline GreedyTrace greedy_naive(const WeightedFLInstance& inst,
                                std::size_t budget, std::size_t threads = 1) {
  detail::check_budget(inst, budget);
  const std::size_t n = inst.size();
  FacilityState state(inst);
  GreedyTrace trace;
  for (std::size_t step = 0; step < budget; ++step) {
    auto gains = detail::all_gains(state, n, threads);
    trace.evaluations += n - step;
    const std::size_t pick = detail::argmax(gains, state);
    trace.order.push_back(pick);
    trace.gains.push_back(gains[pick]);
    state.add(pick);
  }
  trace.objective = objective(inst, trace.order);
  return trace;
}

/// Lazy greedy with stale upper bounds; produces the greedy_naive trace.
///
/// Gains are exactly non-increasing once the set is non-empty: each term
/// max(0, v - best_i) only shrinks as best_i grows, and rounded subtraction
/// and addition are monotone. The first step is therefore evaluated in full,
/// as is the second (gains from the empty set need not bound later gains
/// when similarities can be negative). After that a candidate whose bound
/// was refreshed in the current step and sits on top of the heap is the
/// naive argmax, including the smallest-index tie-break.
inline GreedyTrace greedy_lazy(const WeightedFLInstance& inst,
                               std::size_t budget, std::size_t threads = 1) {
  detail::check_budget(inst, budget);
  const std::size_t n = inst.size();
  FacilityState state(inst);
  GreedyTrace trace;

  auto take = [&](std::size_t pick, double gain) {
    trace.order.push_back(pick);
    trace.gains.push_back(gain);
    state.add(pick);
  };

  {
    auto gains = detail::all_gains(state, n, threads);
    trace.evaluations += n;
    const std::size_t pick = detail::argmax(gains, state);
    take(pick, gains[pick]);
  }
  if (budget == 1) {
    trace.objective = objective(inst, trace.order);
    return trace;
  }

  struct Entry {
    double bound;
    std::size_t index;
    std::size_t step;
  };
  auto lower = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.index > b.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  {
    auto gains = detail::all_gains(state, n, threads);
    trace.evaluations += n - 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!state.contains(j)) heap.push({gains[j], j, 1});
    }
  }
  for (std::size_t step = 1; step < budget; ++step) {
    for (;;) {
      Entry top = heap.top();
      heap.pop();
      if (top.step == step) {
        take(top.index, top.bound);
        break;
      }
      top.bound = state.gain(top.index);
      top.step = step;
      ++trace.evaluations;
      heap.push(top);
    }
  }
  trace.objective = objective(inst, trace.order);
  return trace;
}

/// Number of size-k subsets of n items, as a double (may be inexact).
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

struct BruteForceResult {
  std::vector<std::size_t> subset;
  double objective = 0.0;
};

/// Exhaustive maximum over all budget-subsets, lexicographically smallest
/// subset on ties. Refuses instances with more than `max_subsets` subsets.
inline BruteForceResult brute_force_max(const WeightedFLInstance& inst,
                                        std::size_t budget,
                                        double max_subsets = 1e6) {
  detail::check_budget(inst, budget);
  const std::size_t n = inst.size();
  const double count = binomial(n, budget);
  if (count > max_subsets) {
    throw InputError("instance too large for brute force: C(" +
                     std::to_string(n) + "," + std::to_string(budget) +
                     ") ~ " + std::to_string(count) + " subsets");
  }
  std::vector<std::size_t> current(budget);
  for (std::size_t i = 0; i < budget; ++i) current[i] = i;
  BruteForceResult best{current, objective(inst, current)};
  for (;;) {
    // Advance to the next combination in lexicographic order.
    std::size_t pos = budget;
    while (pos > 0 && current[pos - 1] == n - budget + (pos - 1)) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t i = pos; i < budget; ++i) current[i] = current[i - 1] + 1;
    const double value = objective(inst, current);
    if (value > best.objective) best = {current, value};
  }
  return best;
}

}  // namespace subzero
