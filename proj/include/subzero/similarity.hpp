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
#include <string>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/parallel.hpp"

namespace subzero {

/// Largest class materialized as a dense n x n matrix unless overridden.
inline constexpr std::size_t kDefaultMaxClassRows = 20000;

/// Symmetric Euclidean distances with an exactly zero diagonal.
struct DistanceMatrix {
  Matrix values;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values(i, j);
  }
};

/// Symmetric kernel similarities.
struct SimilarityMatrix {
  Matrix values;
  Kernel kernel;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values(i, j);
  }
};

namespace detail {

inline void check_rows(const Matrix& rows, std::size_t max_rows) {
  if (rows.rows() == 0 || rows.cols() == 0) throw InputError("empty matrix");
  if (rows.rows() > max_rows) {
    const double gib = static_cast<double>(rows.rows()) *
                       static_cast<double>(rows.rows()) * 8.0 /
                       (1024.0 * 1024.0 * 1024.0);
    throw InputError("class of " + std::to_string(rows.rows()) +
                     " rows exceeds the dense-matrix cap of " +
                     std::to_string(max_rows) + " (needs ~" +
                     std::to_string(gib) + " GiB per matrix)");
  }
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (double v : rows.row(i)) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite at row " + std::to_string(i));
      }
    }
  }
}

// Both reductions run in ascending coordinate order.
inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = a[t] - b[t];
    acc += diff * diff;
  }
  return acc;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) acc += a[t] * b[t];
  return acc;
}

// Fills the strict upper triangle with value(i, j) and mirrors it.
template <class Fn>
Matrix symmetric_fill(std::size_t n, double diagonal, std::size_t threads,
                      Fn&& value) {
  Matrix out(n, n);
  parallel_for(n, threads, [&](std::size_t i) {
    out(i, i) = diagonal;
    for (std::size_t j = i + 1; j < n; ++j) out(i, j) = value(i, j);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  }
  return out;
}

}  // namespace detail

/// All pairwise Euclidean distances between the rows of an n x d matrix.
/// Output is bit-identical for every `threads` value.
inline DistanceMatrix pairwise_distances(
    const Matrix& rows, std::size_t threads = 1,
    std::size_t max_rows = kDefaultMaxClassRows) {
  detail::check_rows(rows, max_rows);
  return {detail::symmetric_fill(
      rows.rows(), 0.0, threads, [&](std::size_t i, std::size_t j) {
        return std::sqrt(detail::squared_distance(rows.row(i), rows.row(j)));
      })};
}

/// All pairwise kernel similarities.
///
/// cosine: <a,b> / (|a| |b|), clamped to [-1, 1].
/// shifted_cosine: (1 + cosine) / 2, in [0, 1].
/// rbf: exp(-|a-b|^2 / (2 h^2)), in (0, 1].
/// The diagonal is exactly 1 for every kernel. Raw cosine can be negative,
/// which voids the greedy approximation guarantee.
inline SimilarityMatrix pairwise_similarities(
    const Matrix& rows, const Kernel& kernel, std::size_t threads = 1,
    std::size_t max_rows = kDefaultMaxClassRows) {
  detail::check_rows(rows, max_rows);
  const std::size_t n = rows.rows();
  if (kernel.type == Kernel::Type::kRbf) {
    if (!(kernel.bandwidth > 0.0)) {
      throw InputError("rbf bandwidth must be > 0");
    }
    const double denom = 2.0 * kernel.bandwidth * kernel.bandwidth;
    return {detail::symmetric_fill(n, 1.0, threads,
                                   [&](std::size_t i, std::size_t j) {
                                     return std::exp(
                                         -detail::squared_distance(
                                             rows.row(i), rows.row(j)) /
                                         denom);
                                   }),
            kernel};
  }

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = std::sqrt(detail::dot(rows.row(i), rows.row(i)));
    if (norms[i] == 0.0) {
      throw InputError("zero-norm row " + std::to_string(i));
    }
  }
  const bool shifted = kernel.type == Kernel::Type::kShiftedCosine;
  return {detail::symmetric_fill(
              n, 1.0, threads,
              [&](std::size_t i, std::size_t j) {
                double c = detail::dot(rows.row(i), rows.row(j)) /
                           (norms[i] * norms[j]);
                c = std::clamp(c, -1.0, 1.0);
                return shifted ? 0.5 * (1.0 + c) : c;
              }),
          kernel};
}

}  // namespace subzero
