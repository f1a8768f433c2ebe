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

// Command-line front end: select, find-k, expected-coverage, coverage, bench.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subzero/subzero.hpp"

namespace {

using namespace subzero;

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::size_t parse_threads(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      value == 0) {
    throw InputError("--threads must be a positive integer or 'auto'");
  }
  return value;
}

std::string echo_config(const SelectionConfig& c) {
  return "# method=" + std::string(method_name(c.method)) +
         " alpha=" + shortest(c.alpha) + " gamma=" + shortest(c.gamma) +
         " similarity=" + c.similarity.name() +
         (c.similarity.type == Kernel::Type::kRbf
              ? " bandwidth=" + shortest(c.similarity.bandwidth)
              : std::string()) +
         " seed=" + std::to_string(c.seed) +
         " threads=" + std::to_string(resolve_threads(c.threads));
}

void print_timings(std::ostream& os, const PhaseTimings& t) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "timings[s] distances=%.3f density=%.3f similarity=%.3f "
                "selection=%.3f coverage=%.3f total=%.3f\n",
                t.distances, t.density, t.similarity, t.selection, t.coverage,
                t.total());
  os << buf;
}

struct SelectArgs {
  std::string embeddings, labels, output;
  double alpha = -1.0;
  double gamma = 0.6;
  std::string method = "subzerocore";
  std::string similarity = "shifted-cosine";
  std::uint64_t seed = 0;
  std::string threads = "auto";
};

int run_select(const SelectArgs& a) {
  SelectionConfig config;
  config.alpha = a.alpha;
  config.gamma = a.gamma;
  config.method = parse_method(a.method);
  config.similarity = Kernel::parse(a.similarity);
  config.seed = a.seed;
  config.threads = parse_threads(a.threads);
  config.validate();

  auto set = load_embedding_set(a.embeddings, a.labels);
  std::cout << echo_config(config) << "\n";
  auto result = select(set, config);
  if (!a.output.empty()) write_result(result, a.output);

  std::cout << "class k budget objective coverage\n";
  for (const auto& c : result.classes) {
    std::cout << c.label << " " << (c.k ? std::to_string(*c.k) : "-") << " "
              << c.budget << " " << shortest(c.objective) << " "
              << (c.empirical_coverage ? shortest(*c.empirical_coverage) : "-")
              << "\n";
  }
  print_timings(std::cerr, result.timings);
  return 0;
}

int run_find_k(std::size_t n, std::size_t s, double gamma) {
  auto plan = find_k_for_coverage(n, s, gamma);
  std::cout << "k=" << plan.k
            << " expected_coverage=" << shortest(plan.achieved)
            << (plan.capped ? " capped" : "") << "\n";
  return 0;
}

int run_expected_coverage(std::size_t n, std::size_t s, std::size_t k) {
  std::cout << shortest(expected_coverage(n, s, k)) << "\n";
  return 0;
}

int run_coverage(const std::string& embeddings, const std::string& labels,
                 const std::string& selection, std::optional<std::size_t> k,
                 std::size_t threads) {
  auto set = load_embedding_set(embeddings, labels);
  auto stored = read_selection(selection);

  std::map<std::uint64_t, std::size_t> row_of;
  for (std::size_t i = 0; i < set.size(); ++i) row_of[set.ids[i]] = i;

  std::cout << "class k coverage\n";
  for (const auto& entry : stored) {
    auto it = std::lower_bound(set.class_labels.begin(),
                               set.class_labels.end(), entry.label);
    if (it == set.class_labels.end() || *it != entry.label) {
      throw InputError("selection references unknown class " +
                       std::to_string(entry.label));
    }
    const auto class_id =
        static_cast<std::size_t>(it - set.class_labels.begin());
    std::vector<std::size_t> members;
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set.labels[i] == class_id) {
        local[i] = members.size();
        members.push_back(i);
      }
    }
    std::vector<std::size_t> chosen;
    for (auto id : entry.selected_ids) {
      auto r = row_of.find(id);
      if (r == row_of.end()) {
        throw InputError("selection references unknown id " +
                         std::to_string(id));
      }
      auto l = local.find(r->second);
      if (l == local.end()) {
        throw InputError("id " + std::to_string(id) + " is not in class " +
                         std::to_string(entry.label));
      }
      chosen.push_back(l->second);
    }
    const std::size_t use_k = k ? *k : entry.k.value_or(0);
    if (use_k == 0) {
      throw InputError("class " + std::to_string(entry.label) +
                       " has no stored k; pass --k");
    }
    auto dist = pairwise_distances(gather_rows(set.vectors, members), threads);
    const double cov = empirical_coverage(dist, chosen, use_k);
    std::cout << entry.label << " " << use_k << " " << shortest(cov) << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::size_t n = 500;
  std::size_t d = 4;
  std::vector<double> alphas{0.7, 0.9, 0.99};
  double gamma = 0.6;
  std::size_t classes = 10;
  std::uint64_t seed = 2026;
  std::string threads = "auto";
};

int run_bench(const BenchArgs& a) {
  SelectionConfig base;
  base.gamma = a.gamma;
  base.seed = a.seed;
  base.threads = parse_threads(a.threads);
  if (a.n > base.max_class_rows) {
    const double gib = static_cast<double>(a.n) * static_cast<double>(a.n) *
                       8.0 / (1024.0 * 1024.0 * 1024.0);
    throw InputError("n=" + std::to_string(a.n) +
                     " per class exceeds the dense-matrix cap of " +
                     std::to_string(base.max_class_rows) + " (needs ~" +
                     shortest(gib) + " GiB per matrix)");
  }
  for (double alpha : a.alphas) {
    base.alpha = alpha;
    base.validate();
  }
  auto set = make_gaussian_mixture({a.classes, a.n, a.d, a.seed});
  std::cout << "# gaussian mixture: classes=" << a.classes
            << " per_class=" << a.n << " d=" << a.d << " seed=" << a.seed
            << " gamma=" << shortest(a.gamma)
            << " threads=" << resolve_threads(base.threads) << "\n";

  std::vector<CoresetResult> runs;
  auto table = coverage_table(set, a.alphas, base, &runs);

  std::cout << "\nalpha  method             distances  density  similarity  "
               "selection  coverage     total\n";
  for (const auto& r : runs) {
    char buf[200];
    const auto& t = r.timings;
    std::snprintf(buf, sizeof buf,
                  "%5.2f  %-17s  %9.3f  %7.3f  %10.3f  %9.3f  %8.3f  %8.3f\n",
                  r.config.alpha,
                  std::string(method_name(r.config.method)).c_str(),
                  t.distances, t.density, t.similarity, t.selection,
                  t.coverage, t.total());
    std::cout << buf;
  }
  std::cout << "\ncoverage (%), mean over all points:\n"
            << render_coverage_table(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-free coreset selection (SubZeroCore and baselines)"};
  app.require_subcommand(1);

  SelectArgs sel;
  auto* select_cmd =
      app.add_subcommand("select", "Select a class-wise coreset");
  select_cmd->add_option("--embeddings", sel.embeddings, "CSETEMB1 file")
      ->required();
  select_cmd->add_option("--labels", sel.labels, "index,label CSV")
      ->required();
  select_cmd
      ->add_option("--alpha", sel.alpha,
                   "Pruning ratio in [0,1): fraction of samples removed")
      ->required();
  select_cmd->add_option("--gamma", sel.gamma, "Coverage target in (0,1)")
      ->capture_default_str();
  select_cmd
      ->add_option("--method", sel.method,
                   "subzerocore | facility_location | kcenter_greedy | random")
      ->capture_default_str();
  select_cmd
      ->add_option("--similarity", sel.similarity,
                   "shifted-cosine | cosine | rbf:<bandwidth>")
      ->capture_default_str();
  select_cmd->add_option("--seed", sel.seed, "Seed for the random method")
      ->capture_default_str();
  select_cmd->add_option("--threads", sel.threads, "Worker count or 'auto'")
      ->capture_default_str();
  select_cmd->add_option("--output", sel.output, "Result JSON path");

  std::size_t fk_n = 0, fk_s = 0;
  double fk_gamma = 0.6;
  auto* find_k_cmd = app.add_subcommand(
      "find-k", "Smallest K whose expected coverage reaches gamma");
  find_k_cmd->add_option("--n", fk_n, "Ground-set size")->required();
  find_k_cmd->add_option("--s", fk_s, "Coreset size")->required();
  find_k_cmd->add_option("--gamma", fk_gamma, "Coverage target in (0,1)")
      ->capture_default_str();

  std::size_t ec_n = 0, ec_s = 0, ec_k = 0;
  auto* ec_cmd = app.add_subcommand(
      "expected-coverage", "Expected coverage of a uniform s-subset");
  ec_cmd->add_option("--n", ec_n, "Ground-set size")->required();
  ec_cmd->add_option("--s", ec_s, "Coreset size")->required();
  ec_cmd->add_option("--k", ec_k, "Neighborhood size")->required();

  std::string cov_emb, cov_labels, cov_selection, cov_threads = "auto";
  std::size_t cov_k = 0;
  auto* cov_cmd = app.add_subcommand(
      "coverage", "Empirical coverage of a stored selection, per class");
  cov_cmd->add_option("--embeddings", cov_emb, "CSETEMB1 file")->required();
  cov_cmd->add_option("--labels", cov_labels, "index,label CSV")->required();
  cov_cmd->add_option("--selection", cov_selection, "Result JSON from select")
      ->required();
  auto* cov_k_opt = cov_cmd->add_option(
      "--k", cov_k, "Neighborhood size (default: the k stored per class)");
  cov_cmd->add_option("--threads", cov_threads, "Worker count or 'auto'")
      ->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Run all methods on a seeded Gaussian mixture");
  bench_cmd->add_option("--n", bench.n, "Points per class")
      ->capture_default_str();
  bench_cmd->add_option("--d", bench.d, "Dimension")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alphas, "Pruning ratios")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--gamma", bench.gamma, "Coverage target in (0,1)")
      ->capture_default_str();
  bench_cmd->add_option("--classes", bench.classes, "Number of classes")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Dataset seed")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker count or 'auto'")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*select_cmd) return run_select(sel);
    if (*find_k_cmd) return run_find_k(fk_n, fk_s, fk_gamma);
    if (*ec_cmd) return run_expected_coverage(ec_n, ec_s, ec_k);
    if (*cov_cmd) {
      return run_coverage(
          cov_emb, cov_labels, cov_selection,
          *cov_k_opt ? std::optional<std::size_t>(cov_k) : std::nullopt,
          parse_threads(cov_threads));
    }
    if (*bench_cmd) return run_bench(bench);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
