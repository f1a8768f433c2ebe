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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "subzero/core_types.hpp"
#include "subzero/random.hpp"
#include "subzero/selectors.hpp"

namespace subzero {

struct MixtureSpec {
  std::size_t classes = 10;
  std::size_t per_class = 500;
  std::size_t dim = 4;
  std::uint64_t seed = 2026;
};

/// Seeded class-structured Gaussian mixture.
///
/// Each class sits on a shell of radius 8 around the origin and consists of
/// five modes of unequal spread and weight plus a sparse halo of outliers,
/// so per-class radius distributions are far from uniform.
inline EmbeddingSet make_gaussian_mixture(const MixtureSpec& spec) {
  if (spec.classes < 1 || spec.per_class < 1 || spec.dim < 1) {
    throw InputError("mixture needs classes, per_class and dim >= 1");
  }
  constexpr std::array<double, 5> kSpread = {0.25, 0.45, 0.7, 1.0, 1.5};
  constexpr std::array<double, 5> kShare = {0.30, 0.25, 0.20, 0.15, 0.06};
  constexpr double kOutlierSpread = 3.5;

  Rng rng(spec.seed);
  const std::size_t n = spec.classes * spec.per_class;
  Matrix vectors(n, spec.dim);
  std::vector<std::int64_t> labels(n);
  std::vector<double> center(spec.dim);
  std::vector<std::vector<double>> modes(kSpread.size(),
                                         std::vector<double>(spec.dim));
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double norm = 0.0;
    for (auto& v : center) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : center) v = 8.0 * v / norm;
    for (auto& mode : modes) {
      for (std::size_t t = 0; t < spec.dim; ++t) {
        mode[t] = center[t] + 1.6 * rng.normal();
      }
    }
    for (std::size_t i = 0; i < spec.per_class; ++i, ++row) {
      labels[row] = static_cast<std::int64_t>(c);
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t m = kSpread.size();
      for (std::size_t q = 0; q < kShare.size(); ++q) {
        acc += kShare[q];
        if (u < acc) {
          m = q;
          break;
        }
      }
      auto out = vectors.row(row);
      for (std::size_t t = 0; t < spec.dim; ++t) {
        out[t] = m < kSpread.size()
                     ? modes[m][t] + kSpread[m] * rng.normal()
                     : center[t] + kOutlierSpread * rng.normal();
      }
    }
  }
  return EmbeddingSet::create(std::move(vectors), labels);
}

struct CoverageRow {
  double alpha = 0.0;
  /// K per class (identical when classes have equal size).
  std::vector<std::size_t> k;
  /// Point-weighted mean empirical coverage per method.
  double subzerocore = 0.0;
  double facility_location = 0.0;
  double kcenter_greedy = 0.0;
  double random = 0.0;
};

/// Mean empirical coverage over all points, weighting classes by size.
inline double mean_coverage(const CoresetResult& r) {
  double covered = 0.0;
  double total = 0.0;
  for (const auto& c : r.classes) {
    if (!c.empirical_coverage) continue;
    covered += *c.empirical_coverage * static_cast<double>(c.n);
    total += static_cast<double>(c.n);
  }
  return total > 0.0 ? covered / total : 0.0;
}

/// Runs all four methods at each pruning ratio and tabulates coverage.
/// `results` (optional) receives every run, four per alpha, in method order.
inline std::vector<CoverageRow> coverage_table(
    const EmbeddingSet& set, std::span<const double> alphas,
    SelectionConfig base, std::vector<CoresetResult>* results = nullptr) {
  std::vector<CoverageRow> rows;
  for (double alpha : alphas) {
    base.alpha = alpha;
    CoverageRow row;
    row.alpha = alpha;
    for (Method m : {Method::kSubZeroCore, Method::kFacilityLocation,
                     Method::kKCenterGreedy, Method::kRandom}) {
      base.method = m;
      auto r = select(set, base);
      const double cov = mean_coverage(r);
      switch (m) {
        case Method::kSubZeroCore:
          row.subzerocore = cov;
          for (const auto& c : r.classes) row.k.push_back(c.k.value_or(0));
          break;
        case Method::kFacilityLocation: row.facility_location = cov; break;
        case Method::kKCenterGreedy: row.kcenter_greedy = cov; break;
        case Method::kRandom: row.random = cov; break;
      }
      if (results) results->push_back(std::move(r));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Fixed-width text rendering of a coverage table (coverage in percent).
inline std::string render_coverage_table(const std::vector<CoverageRow>& rows) {
  std::string out =
      "alpha  K(class0)  subzerocore  facility_location  kcenter_greedy  "
      "random\n";
  std::array<char, 160> buf{};
  for (const auto& r : rows) {
    std::snprintf(buf.data(), buf.size(),
                  "%5.2f  %9zu  %11.4f  %17.4f  %14.4f  %6.4f\n", r.alpha,
                  r.k.empty() ? std::size_t{0} : r.k.front(),
                  100.0 * r.subzerocore, 100.0 * r.facility_location,
                  100.0 * r.kcenter_greedy, 100.0 * r.random);
    out += buf.data();
  }
  return out;
}

}  // namespace subzero
