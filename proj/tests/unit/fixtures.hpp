// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small cohort and victims shared by the unit tests. Built once per process.

#ifndef SHS_TESTS_FIXTURES_HPP_
#define SHS_TESTS_FIXTURES_HPP_

#include <map>
#include <utility>

#include "shs/datagen.hpp"
#include "shs/models.hpp"

namespace shs::testing {

struct Cohort {
  Dataset all;
  Dataset train;
  Dataset test;
};

inline const Cohort& small_cohort() {
  static const Cohort c = [] {
    Dataset all = generate(GeneratorSpec::defaults(120, 42, 0.05));
    auto [tr, te] = split(all, SplitSpec{});
    return Cohort{std::move(all), std::move(tr), std::move(te)};
  }();
  return c;
}

// Reduced hyperparameters keep every victim under a second to train.
inline TrainingConfig quick_config(Algorithm a) {
  TrainingConfig c = TrainingConfig::defaults(a);
  c.forest.n_trees = 10;
  c.logistic.epochs = 300;
  c.nn.epochs = 60;
  return c;
}

inline const Classifier& victim(Algorithm a) {
  static std::map<Algorithm, Classifier> cache;
  auto it = cache.find(a);
  if (it == cache.end()) it = cache.emplace(a, train(quick_config(a), small_cohort().train)).first;
  return it->second;
}

inline Dataset head(const Dataset& ds, std::size_t n) {
  std::vector<Sample> s(ds.samples().begin(), ds.samples().begin() + std::min(n, ds.size()));
  return Dataset(std::move(s), ds.provenance(), ds.schema());
}

}  // namespace shs::testing

#endif  // SHS_TESTS_FIXTURES_HPP_
