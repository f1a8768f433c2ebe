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
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "subzero/core_types.hpp"

namespace subzero {

// Embedding file layout, all little-endian:
//   bytes  0..7   magic "CSETEMB1"
//   bytes  8..15  u64 row count n
//   bytes 16..19  u32 dimension d
//   bytes 20..23  u32 dtype tag (0 = f32)
//   then n*d f32 values, row-major.
inline constexpr std::string_view kEmbeddingMagic = "CSETEMB1";
inline constexpr std::size_t kEmbeddingHeaderBytes = 24;
inline constexpr std::uint32_t kDtypeF32 = 0;

/// Raised when a file cannot be opened, read or written.
class IoError : public InputError {
 public:
  using InputError::InputError;
};

namespace detail {

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xff));
  }
}

template <class T>
T get_le(const unsigned char* p) {
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    value |= static_cast<T>(p[b]) << (8 * b);
  }
  return value;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

/// Serializes a matrix as f32; values are narrowed from double.
inline std::string encode_embeddings(const Matrix& m) {
  if (m.cols() > 0xffffffffULL) throw InputError("dimension too large");
  std::string out;
  out.reserve(kEmbeddingHeaderBytes + m.rows() * m.cols() * 4);
  out.append(kEmbeddingMagic);
  detail::put_le<std::uint64_t>(out, m.rows());
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  detail::put_le<std::uint32_t>(out, kDtypeF32);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (double v : m.row(i)) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite value at row " + std::to_string(i));
      }
      detail::put_le<std::uint32_t>(
          out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

inline Matrix decode_embeddings(std::string_view bytes) {
  if (bytes.size() < kEmbeddingMagic.size() ||
      bytes.substr(0, kEmbeddingMagic.size()) != kEmbeddingMagic) {
    throw InputError("unrecognized format");
  }
  if (bytes.size() < kEmbeddingHeaderBytes) {
    throw InputError("truncated header");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const auto n = detail::get_le<std::uint64_t>(p + 8);
  const auto d = detail::get_le<std::uint32_t>(p + 16);
  const auto dtype = detail::get_le<std::uint32_t>(p + 20);
  if (dtype != kDtypeF32) {
    throw InputError("unsupported dtype tag " + std::to_string(dtype));
  }
  const std::size_t payload = bytes.size() - kEmbeddingHeaderBytes;
  if (d != 0 && n > payload / 4 / d) throw InputError("truncated payload");
  const std::size_t expected = static_cast<std::size_t>(n) * d * 4;
  if (payload < expected) throw InputError("truncated payload");
  if (payload > expected) throw InputError("trailing bytes after payload");
  Matrix m(static_cast<std::size_t>(n), d);
  const unsigned char* q = p + kEmbeddingHeaderBytes;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (auto& v : m.row(i)) {
      const float f = std::bit_cast<float>(detail::get_le<std::uint32_t>(q));
      q += 4;
      if (!std::isfinite(f)) {
        throw InputError("non-finite value at row " + std::to_string(i));
      }
      v = f;
    }
  }
  return m;
}

inline void write_embeddings(const std::filesystem::path& path,
                             const Matrix& m) {
  detail::write_file(path, encode_embeddings(m));
}

inline Matrix read_embeddings(const std::filesystem::path& path) {
  return decode_embeddings(detail::read_file(path));
}

/// Parses `index,label` CSV text (with that header line) into labels
/// ordered by index. Every index 0..n-1 must appear exactly once.
inline std::vector<std::int64_t> parse_labels(std::string_view text) {
  std::vector<std::optional<std::int64_t>> by_index;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                          : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != "index,label") {
        throw InputError("line 1: expected header 'index,label'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw InputError(where + "expected 'index,label'");
    }
    auto field_index = line.substr(0, comma);
    auto field_label = line.substr(comma + 1);
    std::uint64_t index = 0;
    std::int64_t label = 0;
    auto r1 = std::from_chars(field_index.data(),
                              field_index.data() + field_index.size(), index);
    if (r1.ec != std::errc{} ||
        r1.ptr != field_index.data() + field_index.size()) {
      throw InputError(where + "non-integer index '" +
                       std::string(field_index) + "'");
    }
    auto r2 = std::from_chars(field_label.data(),
                              field_label.data() + field_label.size(), label);
    if (r2.ec != std::errc{} ||
        r2.ptr != field_label.data() + field_label.size()) {
      throw InputError(where + "non-integer label '" +
                       std::string(field_label) + "'");
    }
    if (label < 0) throw InputError(where + "negative label");
    if (index > (1ULL << 40)) throw InputError(where + "index too large");
    if (index >= by_index.size()) by_index.resize(index + 1);
    if (by_index[index]) {
      throw InputError(where + "duplicate index " + std::to_string(index));
    }
    by_index[index] = label;
  }
  if (!header_seen) throw InputError("line 1: expected header 'index,label'");
  std::vector<std::int64_t> labels(by_index.size());
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    if (!by_index[i]) throw InputError("missing index " + std::to_string(i));
    labels[i] = *by_index[i];
  }
  return labels;
}

inline std::vector<std::int64_t> read_labels(
    const std::filesystem::path& path) {
  return parse_labels(detail::read_file(path));
}

inline std::string format_labels(std::span<const std::int64_t> labels) {
  std::string out = "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
  }
  return out;
}

inline void write_labels(const std::filesystem::path& path,
                         std::span<const std::int64_t> labels) {
  detail::write_file(path, format_labels(labels));
}

/// Reads embeddings and labels and builds a normalized ground set.
inline EmbeddingSet load_embedding_set(const std::filesystem::path& embeddings,
                                       const std::filesystem::path& labels) {
  Matrix m = read_embeddings(embeddings);
  auto l = read_labels(labels);
  if (l.size() != m.rows()) {
    throw InputError("label length mismatch: " + std::to_string(l.size()) +
                     " labels for " + std::to_string(m.rows()) + " rows");
  }
  return EmbeddingSet::create(std::move(m), l);
}

namespace detail {

// 17 significant digits round-trip every double.
inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

inline std::string json_number(const std::optional<double>& v) {
  return v ? json_number(*v) : "null";
}

}  // namespace detail

/// Renders a result as JSON with a fixed key order. Timings are wall-clock
/// and vary between runs, so they are emitted only on request; otherwise
/// "timings" is null and the document is reproducible byte for byte.
inline std::string render_result_json(const CoresetResult& result,
                                      bool include_timings = false) {
  using detail::json_number;
  const auto& c = result.config;
  std::ostringstream os;
  os << "{\n";
  os << "  \"config\": {\"method\": \"" << method_name(c.method)
     << "\", \"alpha\": " << json_number(c.alpha)
     << ", \"gamma\": " << json_number(c.gamma) << ", \"similarity\": \""
     << c.similarity.name() << "\", \"bandwidth\": "
     << (c.similarity.type == Kernel::Type::kRbf
             ? json_number(c.similarity.bandwidth)
             : std::string("null"))
     << ", \"seed\": " << c.seed << "},\n";
  os << "  \"per_class\": [";
  for (std::size_t i = 0; i < result.classes.size(); ++i) {
    const auto& r = result.classes[i];
    os << (i == 0 ? "\n" : ",\n");
    os << "    {\"class\": " << r.label << ", \"n\": " << r.n
       << ", \"budget\": " << r.budget << ", \"k\": "
       << (r.k ? std::to_string(*r.k) : std::string("null"))
       << ", \"k_capped\": " << (r.k_capped ? "true" : "false")
       << ", \"objective\": " << json_number(r.objective)
       << ", \"mu\": " << json_number(r.mu)
       << ", \"sigma\": " << json_number(r.sigma)
       << ", \"expected_coverage\": " << json_number(r.expected_coverage)
       << ", \"empirical_coverage\": " << json_number(r.empirical_coverage)
       << ",\n     \"selected_ids\": [";
    for (std::size_t j = 0; j < r.selected_ids.size(); ++j) {
      os << (j == 0 ? "" : ", ") << r.selected_ids[j];
    }
    os << "]}";
  }
  os << (result.classes.empty() ? "],\n" : "\n  ],\n");
  os << "  \"totals\": {\"classes\": " << result.classes.size()
     << ", \"selected\": " << result.total_selected
     << ", \"target\": " << json_number(result.target_total)
     << ", \"rounding_deviation\": "
     << json_number(static_cast<double>(result.total_selected) -
                    result.target_total)
     << "},\n";
  if (include_timings) {
    const auto& t = result.timings;
    os << "  \"timings\": {\"distances\": " << json_number(t.distances)
       << ", \"density\": " << json_number(t.density)
       << ", \"similarity\": " << json_number(t.similarity)
       << ", \"selection\": " << json_number(t.selection)
       << ", \"coverage\": " << json_number(t.coverage)
       << ", \"total\": " << json_number(t.total()) << "}\n";
  } else {
    os << "  \"timings\": null\n";
  }
  os << "}\n";
  return os.str();
}

inline void write_result(const CoresetResult& result,
                         const std::filesystem::path& path,
                         bool include_timings = false) {
  detail::write_file(path, render_result_json(result, include_timings));
}

/// One class entry of a stored result, as needed to re-score a selection.
struct StoredSelection {
  std::int64_t label = 0;
  std::optional<std::size_t> k;
  std::vector<std::uint64_t> selected_ids;
};

inline std::vector<StoredSelection> parse_selection(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result file: ") + e.what());
  }
  std::vector<StoredSelection> out;
  try {
    for (const auto& entry : doc.at("per_class")) {
      StoredSelection s;
      s.label = entry.at("class").get<std::int64_t>();
      if (entry.contains("k") && !entry.at("k").is_null()) {
        s.k = entry.at("k").get<std::size_t>();
      }
      s.selected_ids =
          entry.at("selected_ids").get<std::vector<std::uint64_t>>();
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result file: ") + e.what());
  }
  return out;
}

inline std::vector<StoredSelection> read_selection(
    const std::filesystem::path& path) {
  return parse_selection(detail::read_file(path));
}

}  // namespace subzero
