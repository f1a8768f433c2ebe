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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero if any criterion fails. --regenerate rewrites the golden files.

#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "subzero/subzero.hpp"

namespace fs = std::filesystem;
using namespace subzero;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool regenerate = false;
fs::path golden_dir = SUBZERO_GOLDEN_DIR;

std::string slurp(const fs::path& p) {
  if (!fs::exists(p)) return {};
  return detail::read_file(p);
}

// ---------------------------------------------------------------------------

Outcome closed_form_exact() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 3; n <= 12; ++n) {
    for (std::size_t k = 1; k <= n - 2; ++k) {
      for (std::size_t s = 1; s <= n - k; ++s) {
        const double oracle = testing::enumerated_hit_probability(n, s, k);
        worst = std::max(worst, std::abs(expected_coverage(n, s, k) - oracle));
        ++cases;
      }
    }
  }
  const double t = seconds_since(start);
  return {worst < 1e-12 && t < 10.0,
          fmt("%zu cases, max |delta| %.3g, %.2f s", cases, worst, t)};
}

Outcome monte_carlo() {
  const auto start = Clock::now();
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 100;
  for (auto [n, s] : {std::pair<std::size_t, std::size_t>{200, 20}, {500, 25}}) {
    const auto plan = find_k_for_coverage(n, s, 0.6);
    for (std::size_t d : {2u, 16u}) {
      const auto est = mc_expected_coverage(n, s, plan.k, 20000, ++seed, d,
                                            BallMembership::kExcludeSelf, 0);
      const double delta = est.mean - plan.achieved;
      ok = ok && std::abs(delta) <= 0.01;
      detail += fmt("n=%zu s=%zu k=%zu d=%zu delta=%+.5f; ", n, s, plan.k, d,
                    delta);
    }
  }
  const double t = seconds_since(start);
  ok = ok && t < 60.0;
  return {ok, detail + fmt("%.2f s", t)};
}

Outcome find_k_minimal() {
  std::size_t cases = 0, bad = 0;
  std::vector<double> gammas{0.6};
  for (int i = 1; i < 20; ++i) gammas.push_back(i / 20.0);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t s = 1; s < n; ++s) {
      for (double g : gammas) {
        const auto plan = find_k_for_coverage(n, s, g);
        const std::size_t oracle = testing::enumerated_min_k(n, s, g);
        const bool ok = oracle == 0 ? plan.capped && plan.k == n - 1
                                    : !plan.capped && plan.k == oracle;
        bad += ok ? 0 : 1;
        ++cases;
      }
    }
  }
  const auto worked = find_k_for_coverage(5, 2, 0.6);
  return {bad == 0 && worked.k == 2,
          fmt("%zu cases, %zu mismatches; (5,2,0.6) -> k=%zu", cases, bad,
              worked.k)};
}

WeightedFLInstance random_instance(Rng& rng, std::size_t n) {
  const bool coarse = rng.below(2) == 0;
  return {testing::random_similarity(rng, n, coarse),
          testing::random_weights(rng, n, coarse)};
}

Outcome submodularity() {
  Rng rng(404);
  std::size_t dr_bad = 0, mono_bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(28);
    auto inst = random_instance(rng, n);
    // Random chain A subset B, and j outside B.
    auto perm = rng.sample(n, n);
    const std::size_t b_size = rng.below(n - 1);
    const std::size_t a_size = b_size == 0 ? 0 : rng.below(b_size + 1);
    std::vector<std::size_t> b(perm.begin(), perm.begin() + b_size);
    std::vector<std::size_t> a(perm.begin(), perm.begin() + a_size);
    const std::size_t j = perm[b_size];
    const double excess = marginal_gain(inst, b, j) - marginal_gain(inst, a, j);
    worst = std::max(worst, excess);
    dr_bad += excess > 1e-9 ? 1 : 0;
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(29);
    auto inst = random_instance(rng, n);
    auto perm = rng.sample(n, n);
    const std::size_t b_size = 1 + rng.below(n);
    const std::size_t a_size = rng.below(b_size + 1);
    std::vector<std::size_t> b(perm.begin(), perm.begin() + b_size);
    std::vector<std::size_t> a(perm.begin(), perm.begin() + a_size);
    mono_bad += objective(inst, a) > objective(inst, b) + 1e-9 ? 1 : 0;
  }
  return {dr_bad == 0 && mono_bad == 0,
          fmt("1000 triples, %zu violations (max excess %.3g); 1000 pairs, "
              "%zu monotonicity violations",
              dr_bad, worst, mono_bad)};
}

Outcome greedy_ratio() {
  Rng rng(505);
  const double bound = 1.0 - std::exp(-1.0);
  std::size_t bad = 0;
  double worst = 1.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(11);
    const std::size_t budget = 1 + rng.below(std::min<std::size_t>(6, n));
    auto inst = random_instance(rng, n);
    const double greedy = greedy_lazy(inst, budget).objective;
    const double opt = brute_force_max(inst, budget).objective;
    worst = std::min(worst, greedy / opt);
    bad += greedy < bound * opt ? 1 : 0;
  }
  return {bad == 0, fmt("200 instances, %zu violations, worst ratio %.4f",
                        bad, worst)};
}

Outcome lazy_exact() {
  Rng rng(606);
  std::size_t bad = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(40);
    const std::size_t budget = 1 + rng.below(n);
    auto inst = random_instance(rng, n);
    const auto naive = greedy_naive(inst, budget);
    const auto lazy = greedy_lazy(inst, budget, 1 + t % 4);
    const bool same = naive.order == lazy.order && naive.gains == lazy.gains &&
                      naive.objective == lazy.objective;
    bad += same ? 0 : 1;
  }
  return {bad == 0, fmt("500 instances, %zu trace mismatches", bad)};
}

Outcome radius_density_ordering() {
  std::size_t clouds = 0, bad = 0;
  for (std::size_t d : {2u, 8u}) {
    for (std::size_t k : {1u, 3u, 5u}) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(mix_seed(700 + d, seed));
        const std::size_t n = 50;
        auto dist = pairwise_distances(testing::random_cloud(rng, n, d));
        const auto radii = knn_radii(dist, k).radii;
        std::vector<double> logd(n);
        for (std::size_t i = 0; i < n; ++i) {
          logd[i] = log_density(ball_count(dist, i, radii[i]), radii[i], d);
        }
        std::vector<std::size_t> by_radius(n), by_density(n);
        std::iota(by_radius.begin(), by_radius.end(), 0);
        std::iota(by_density.begin(), by_density.end(), 0);
        std::stable_sort(by_radius.begin(), by_radius.end(),
                         [&](auto a, auto b) { return radii[a] < radii[b]; });
        std::stable_sort(by_density.begin(), by_density.end(),
                         [&](auto a, auto b) { return logd[a] > logd[b]; });
        bad += by_radius == by_density ? 0 : 1;
        ++clouds;
      }
    }
  }
  return {bad == 0, fmt("%zu clouds, %zu order mismatches", clouds, bad)};
}

Outcome reduction() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(mix_seed(800, seed));
    const std::size_t m = 10 + rng.below(30);
    const std::size_t d = 2 + rng.below(7);
    auto base = testing::random_cloud(rng, m, d);
    Matrix doubled(2 * m, d);
    for (std::size_t i = 0; i < m; ++i) {
      std::copy(base.row(i).begin(), base.row(i).end(),
                doubled.row(2 * i).begin());
      std::copy(base.row(i).begin(), base.row(i).end(),
                doubled.row(2 * i + 1).begin());
    }
    std::vector<std::int64_t> labels(2 * m, 0);
    auto set = EmbeddingSet::create(std::move(doubled), labels);
    SelectionConfig c;
    c.alpha = std::array{0.5, 0.7, 0.8, 0.9}[seed % 4];
    c.gamma = 0.05;  // K = 1: every radius is the distance to a twin
    const auto szc = select_subzerocore(set, c);
    const auto fl = select_facility_location(set, c);
    const auto& cls = szc.classes.front();
    const bool ok = cls.k == 1u && cls.sigma == 0.0 &&
                    cls.selected_ids == fl.classes.front().selected_ids;
    bad += ok ? 0 : 1;
  }
  return {bad == 0, fmt("50 cases, %zu sequence mismatches", bad)};
}

Outcome coverage_trend() {
  const auto set = make_gaussian_mixture(MixtureSpec{});
  SelectionConfig c;
  c.threads = 0;
  const std::vector<double> alphas{0.7, 0.9, 0.99};
  const auto rows = coverage_table(set, alphas, c);
  const std::string table = render_coverage_table(rows);
  const auto path = golden_dir / "coverage_table.txt";
  if (regenerate) detail::write_file(path, table);
  const bool golden = slurp(path) == table;
  const auto& r = rows.front();
  return {r.subzerocore > r.facility_location && golden,
          fmt("alpha=0.70 subzerocore %.2f%% vs facility_location %.2f%%; "
              "golden table %s",
              100 * r.subzerocore, 100 * r.facility_location,
              golden ? "matches" : "DIFFERS")};
}

Outcome accuracy_tables() {
  return {true, "no accuracy criteria: requires model training"};
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() /
                   ("subzero_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto set = make_gaussian_mixture(MixtureSpec{});
  write_embeddings(dir / "emb.bin", set.vectors);
  std::vector<std::int64_t> labels(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    labels[i] = set.class_labels[set.labels[i]];
  }
  write_labels(dir / "labels.csv", labels);

  std::vector<std::string> outputs;
  bool ran = true;
  for (int t : {1, 4, 8}) {
    const auto out = dir / ("sel" + std::to_string(t) + ".json");
    const std::string cmd =
        std::string(SUBZEROCORE_CLI) + " select --embeddings " +
        (dir / "emb.bin").string() + " --labels " +
        (dir / "labels.csv").string() + " --alpha 0.9 --threads " +
        std::to_string(t) + " --output " + out.string() + " > /dev/null 2>&1";
    ran = ran && std::system(cmd.c_str()) == 0;
    outputs.push_back(slurp(out));
  }
  fs::remove_all(dir);
  const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1] &&
                    outputs[0] == outputs[2];
  const auto path = golden_dir / "select_alpha0.9.json";
  if (regenerate && same) detail::write_file(path, outputs[0]);
  const bool golden = same && slurp(path) == outputs[0];
  return {same && golden,
          fmt("threads 1/4/8 %s; golden %s", same ? "identical" : "DIFFER",
              golden ? "matches" : "DIFFERS")};
}

/// Fastest of `repeats` runs of one SubZeroCore class. Smaller classes get
/// more repeats since their runs are short and noisier.
PhaseTimings time_class(std::size_t n, int repeats) {
  const auto set = make_gaussian_mixture({1, n, 128, 1200 + n});
  SelectionConfig c;
  c.alpha = 0.9;
  c.threads = 1;
  PhaseTimings best;
  double best_total = INFINITY;
  for (int r = 0; r < repeats; ++r) {
    const auto res = select_subzerocore(set, c);
    if (res.timings.total() < best_total) {
      best_total = res.timings.total();
      best = res.timings;
    }
  }
  return best;
}

Outcome performance() {
  const auto start = Clock::now();
  const auto set = make_gaussian_mixture({1, 2000, 128, 1212});
  SelectionConfig c;
  c.alpha = 0.9;
  c.threads = 1;
  select_subzerocore(set, c);
  const double wall = seconds_since(start);

  std::vector<double> phase;
  for (std::size_t n : {1000u, 2000u, 4000u}) {
    const auto t = time_class(n, static_cast<int>(16000 / n));
    phase.push_back(t.density + t.selection);
  }
  const double r1 = phase[1] / phase[0];
  const double r2 = phase[2] / phase[1];
  return {wall < 5.0 && r1 <= 4.5 && r2 <= 4.5,
          fmt("n=2000 d=128 in %.2f s; radii+greedy %.3f/%.3f/%.3f s, "
              "ratios %.2f %.2f",
              wall, phase[0], phase[1], phase[2], r1, r2)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SubZeroCore acceptance suite"};
  app.add_flag("--regenerate", regenerate, "Rewrite golden files");
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"expected coverage matches enumeration", closed_form_exact},
      {"Monte-Carlo coverage within 0.01", monte_carlo},
      {"find_k minimal", find_k_minimal},
      {"submodular and monotone", submodularity},
      {"greedy within 1-1/e of optimum", greedy_ratio},
      {"lazy greedy equals naive greedy", lazy_exact},
      {"radius order equals density order", radius_density_ordering},
      {"equal radii reduce to facility location", reduction},
      {"coverage table trend and golden", coverage_trend},
      {"accuracy tables", accuracy_tables},
      {"select output independent of threads", determinism},
      {"performance budget", performance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
      continue;
    }
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
