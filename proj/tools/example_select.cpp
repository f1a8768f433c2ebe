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

// Minimal library usage: build a small labeled set, select a coreset, and
// print the picks per class.

#include <iostream>

#include "subzero/subzero.hpp"

int main() {
  subzero::MixtureSpec spec;
  spec.classes = 3;
  spec.per_class = 200;
  auto set = subzero::make_gaussian_mixture(spec);

  subzero::SelectionConfig config;
  config.alpha = 0.9;
  config.gamma = 0.6;
  config.threads = 0;

  auto result = subzero::select_subzerocore(set, config);
  for (const auto& c : result.classes) {
    std::cout << "class " << c.label << ": K=" << *c.k << " picked";
    for (auto id : c.selected_ids) std::cout << ' ' << id;
    std::cout << "\n  coverage=" << *c.empirical_coverage
              << " expected=" << *c.expected_coverage << "\n";
  }
}
