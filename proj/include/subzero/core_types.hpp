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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subzero {

/// Raised for any violation of a documented precondition on caller input.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Dense row-major matrix of 64-bit reals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InputError("matrix data size does not match " +
                       std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  /// Builds a matrix from nested rows; all rows must share one length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw InputError("ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Copies the listed rows of `m` into a new matrix, preserving order.
inline Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto src = m.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

/// The ground set: embeddings, dense class ids, and original dataset ids.
///
/// `labels` holds class ids remapped to 0..C-1 in ascending order of the
/// original label; `class_labels[c]` recovers the original label of class c.
struct EmbeddingSet {
  Matrix vectors;
  std::vector<std::size_t> labels;
  std::vector<std::int64_t> class_labels;
  std::vector<std::uint64_t> ids;

  std::size_t size() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
  std::size_t num_classes() const noexcept { return class_labels.size(); }

  /// Normalizes raw labels and attaches ids (0..N-1 when `ids` is empty).
  /// Throws InputError listing the first problem found by
  /// validate_embeddings.
  static EmbeddingSet create(Matrix vectors, std::span<const std::int64_t> raw,
                             std::vector<std::uint64_t> ids = {});
};

/// One problem found by validate_embeddings. `row` is set when the problem
/// is attributable to a single sample.
struct Diagnostic {
  enum class Kind { kEmptySet, kNonFinite, kLabelLengthMismatch,
                    kIdLengthMismatch, kNegativeLabel };
  Kind kind;
  std::optional<std::size_t> row;
  std::string message;
};

/// Checks the ground-set invariants on raw inputs; an empty result means ok.
inline std::vector<Diagnostic> validate_embeddings(
    const Matrix& vectors, std::span<const std::int64_t> labels,
    std::span<const std::uint64_t> ids) {
  std::vector<Diagnostic> out;
  if (vectors.rows() == 0 || vectors.cols() == 0) {
    out.push_back({Diagnostic::Kind::kEmptySet, std::nullopt, "empty set"});
    return out;
  }
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    for (double v : vectors.row(i)) {
      if (!std::isfinite(v)) {
        out.push_back({Diagnostic::Kind::kNonFinite, i,
                       "non-finite at row " + std::to_string(i)});
        break;
      }
    }
  }
  if (labels.size() != vectors.rows()) {
    out.push_back({Diagnostic::Kind::kLabelLengthMismatch, std::nullopt,
                   "label length mismatch"});
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0) {
        out.push_back({Diagnostic::Kind::kNegativeLabel, i,
                       "negative label at row " + std::to_string(i)});
      }
    }
  }
  if (ids.size() != vectors.rows()) {
    out.push_back({Diagnostic::Kind::kIdLengthMismatch, std::nullopt,
                   "id length mismatch"});
  }
  return out;
}

inline std::vector<Diagnostic> validate_embeddings(const EmbeddingSet& set) {
  std::vector<std::int64_t> raw(set.labels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = set.labels[i] < set.class_labels.size()
                 ? set.class_labels[set.labels[i]]
                 : -1;
  }
  return validate_embeddings(set.vectors, raw, set.ids);
}

inline EmbeddingSet EmbeddingSet::create(Matrix vectors,
                                         std::span<const std::int64_t> raw,
                                         std::vector<std::uint64_t> ids) {
  if (ids.empty()) {
    ids.resize(vectors.rows());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  }
  auto diags = validate_embeddings(vectors, raw, ids);
  if (!diags.empty()) throw InputError(diags.front().message);

  EmbeddingSet set;
  set.class_labels.assign(raw.begin(), raw.end());
  std::sort(set.class_labels.begin(), set.class_labels.end());
  set.class_labels.erase(
      std::unique(set.class_labels.begin(), set.class_labels.end()),
      set.class_labels.end());
  set.labels.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = std::lower_bound(set.class_labels.begin(),
                               set.class_labels.end(), raw[i]);
    set.labels[i] = static_cast<std::size_t>(it - set.class_labels.begin());
  }
  set.vectors = std::move(vectors);
  set.ids = std::move(ids);
  return set;
}

enum class Method { kSubZeroCore, kFacilityLocation, kKCenterGreedy, kRandom };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kSubZeroCore: return "subzerocore";
    case Method::kFacilityLocation: return "facility_location";
    case Method::kKCenterGreedy: return "kcenter_greedy";
    case Method::kRandom: return "random";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::kSubZeroCore, Method::kFacilityLocation,
                   Method::kKCenterGreedy, Method::kRandom}) {
    if (name == method_name(m)) return m;
  }
  // Accept dashed spellings on the command line.
  if (name == "facility-location") return Method::kFacilityLocation;
  if (name == "kcenter-greedy") return Method::kKCenterGreedy;
  throw InputError("unknown method '" + std::string(name) + "'");
}

/// Similarity kernel descriptor. `bandwidth` is only meaningful for kRbf.
struct Kernel {
  enum class Type { kShiftedCosine, kCosine, kRbf };
  Type type = Type::kShiftedCosine;
  double bandwidth = 1.0;

  static Kernel shifted_cosine() { return {Type::kShiftedCosine, 1.0}; }
  static Kernel cosine() { return {Type::kCosine, 1.0}; }
  static Kernel rbf(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
      throw InputError("rbf bandwidth must be > 0");
    }
    return {Type::kRbf, bandwidth};
  }

  /// Parses "shifted-cosine", "cosine" or "rbf:<bandwidth>".
  static Kernel parse(std::string_view text) {
    if (text == "shifted-cosine" || text == "shifted_cosine") {
      return shifted_cosine();
    }
    if (text == "cosine") return cosine();
    if (text.starts_with("rbf:")) {
      std::string bw(text.substr(4));
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(bw, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != bw.size()) {
        throw InputError("bad rbf bandwidth '" + bw + "'");
      }
      return rbf(value);
    }
    if (text == "rbf") throw InputError("rbf requires a bandwidth: rbf:<h>");
    throw InputError("unknown similarity '" + std::string(text) + "'");
  }

  std::string name() const {
    switch (type) {
      case Type::kShiftedCosine: return "shifted_cosine";
      case Type::kCosine: return "cosine";
      case Type::kRbf: return "rbf";
    }
    return "unknown";
  }

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

struct SelectionConfig {
  double alpha = 0.0;
  double gamma = 0.6;
  Method method = Method::kSubZeroCore;
  Kernel similarity = Kernel::shifted_cosine();
  std::uint64_t seed = 0;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 1;
  /// Classes larger than this are rejected instead of materializing n^2.
  std::size_t max_class_rows = 20000;

  void validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must be < 1");
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw InputError("gamma must be in (0, 1)");
    }
    if (similarity.type == Kernel::Type::kRbf &&
        !(similarity.bandwidth > 0.0)) {
      throw InputError("rbf bandwidth must be > 0");
    }
  }
};

/// Rows of one class plus its coreset budget.
struct ClassView {
  std::size_t class_id = 0;
  std::vector<std::size_t> member_rows;
  std::size_t budget = 0;
};

/// Per-class budget: max(1, round_half_up((1 - alpha) * n_c)).
inline std::size_t class_budget(std::size_t n_c, double alpha) {
  const double exact = (1.0 - alpha) * static_cast<double>(n_c);
  // The small slack absorbs representation error such as 0.3 * 500.
  auto b = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::clamp<std::size_t>(b, 1, n_c);
}

/// Returns (class_id, budget) for every distinct label, ascending by label.
inline std::vector<std::pair<std::int64_t, std::size_t>> compute_class_budgets(
    std::span<const std::int64_t> labels, double alpha) {
  if (labels.empty()) throw InputError("empty label list");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must be < 1");
  std::map<std::int64_t, std::size_t> counts;
  for (auto l : labels) ++counts[l];
  std::vector<std::pair<std::int64_t, std::size_t>> out;
  out.reserve(counts.size());
  for (auto [label, n] : counts) out.emplace_back(label, class_budget(n, alpha));
  return out;
}

/// Splits a normalized set into per-class views with budgets.
inline std::vector<ClassView> class_views(const EmbeddingSet& set,
                                          double alpha) {
  std::vector<ClassView> views(set.num_classes());
  for (std::size_t c = 0; c < views.size(); ++c) views[c].class_id = c;
  for (std::size_t i = 0; i < set.size(); ++i) {
    views[set.labels[i]].member_rows.push_back(i);
  }
  for (auto& v : views) v.budget = class_budget(v.member_rows.size(), alpha);
  return views;
}

/// Wall-clock seconds per pipeline phase, summed over classes.
struct PhaseTimings {
  double distances = 0.0;
  double density = 0.0;
  double similarity = 0.0;
  double selection = 0.0;
  double coverage = 0.0;

  double total() const {
    return distances + density + similarity + selection + coverage;
  }
};

struct ClassResult {
  std::int64_t label = 0;
  std::size_t n = 0;
  std::size_t budget = 0;
  /// Neighborhood size from coverage inversion; absent when the class is too
  /// small to invert (only possible for the baselines).
  std::optional<std::size_t> k;
  bool k_capped = false;
  std::optional<double> expected_coverage;
  /// Original ids in selection order.
  std::vector<std::uint64_t> selected_ids;
  /// Objective of the final set: weighted facility location for SubZeroCore,
  /// plain facility location for every other method.
  double objective = 0.0;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<double> empirical_coverage;
};

struct CoresetResult {
  SelectionConfig config;
  std::vector<ClassResult> classes;
  std::size_t total_selected = 0;
  /// (1 - alpha) * N before per-class rounding.
  double target_total = 0.0;
  PhaseTimings timings;
};

}  // namespace subzero
