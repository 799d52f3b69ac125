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

#include "shs/poisoning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "parallel.hpp"
#include "shs/datagen.hpp"
#include "shs/format.hpp"
#include "shs/random.hpp"
#include "shs/stats.hpp"

namespace shs {

namespace {

// First k entries of a seeded shuffle of `pool`, returned in ascending order.
std::vector<std::size_t> choose(std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

PatientState flipped(PatientState label, const FlipRule& rule, Rng& rng) {
  if (rule.kind == FlipRule::Kind::kTargetedToClass) return rule.target;
  const auto shift = 1 + uniform_index(rng, kNumStates - 1);
  return state_from_index(static_cast<int>((to_index(label) + shift) % kNumStates));
}

}  // namespace

std::string_view poison_mode_name(PoisonMode m) {
  switch (m) {
    case PoisonMode::kLabelFlip: return "label_flip";
    case PoisonMode::kInjection: return "injection";
    case PoisonMode::kModification: return "modification";
  }
  return "?";
}

std::optional<PoisonMode> parse_poison_mode(std::string_view name) {
  for (PoisonMode m : {PoisonMode::kLabelFlip, PoisonMode::kInjection, PoisonMode::kModification})
    if (name == poison_mode_name(m)) return m;
  return std::nullopt;
}

void validate(const PoisonSpec& spec) {
  if (!(spec.rate >= 0.0 && spec.rate <= 1.0))
    throw Error(ErrorCode::kConfig, "poison rate must lie in [0, 1], got " + format_g9(spec.rate));
  if (!(spec.modification_threshold >= 0.0) || !std::isfinite(spec.modification_threshold))
    throw Error(ErrorCode::kConfig, "modification threshold must be finite and non-negative");
}

std::pair<Dataset, PoisonManifest> poison(const Dataset& train, const PoisonSpec& spec) {
  validate(spec);
  const std::size_t n = train.size();
  const auto k = static_cast<std::size_t>(std::floor(spec.rate * static_cast<double>(n)));
  std::vector<Sample> samples = train.samples();
  PoisonManifest manifest;
  manifest.mode = spec.mode;
  Rng rng(spec.seed);
  const bool targeted = spec.flip_rule.kind == FlipRule::Kind::kTargetedToClass;

  switch (spec.mode) {
    case PoisonMode::kLabelFlip: {
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < n; ++i)
        if (!targeted || samples[i].label != spec.flip_rule.target) pool.push_back(i);
      if (pool.size() < k)
        throw Error(ErrorCode::kConfig, "not enough samples outside the flip target class");
      for (std::size_t i : choose(std::move(pool), k, rng)) {
        const PatientState before = samples[i].label;
        samples[i].label = flipped(before, spec.flip_rule, rng);
        manifest.entries.push_back({i, i, before, samples[i].label});
      }
      break;
    }
    case PoisonMode::kInjection: {
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < n; ++i)
        if (!targeted || samples[i].label != spec.flip_rule.target) pool.push_back(i);
      if (pool.empty() && k > 0)
        throw Error(ErrorCode::kConfig, "no samples outside the flip target class");
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = pool[uniform_index(rng, pool.size())];
        Sample copy = train[src];
        copy.label = flipped(copy.label, spec.flip_rule, rng);
        manifest.entries.push_back({samples.size(), src, train[src].label, copy.label});
        samples.push_back(copy);
      }
      break;
    }
    case PoisonMode::kModification: {
      std::array<double, kNumFeatures> lo;
      std::array<double, kNumFeatures> hi;
      lo.fill(std::numeric_limits<double>::infinity());
      hi.fill(-std::numeric_limits<double>::infinity());
      for (const Sample& s : samples) {
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
          lo[f] = std::min(lo[f], s.values[f]);
          hi[f] = std::max(hi[f], s.values[f]);
        }
      }
      std::vector<std::size_t> pool(n);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t i : choose(std::move(pool), k, rng)) {
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
          const double bound = spec.modification_threshold * (hi[f] - lo[f]);
          samples[i].values[f] = round_g9(samples[i].values[f] + uniform(rng, -bound, bound));
        }
        manifest.entries.push_back({i, i, samples[i].label, samples[i].label});
      }
      break;
    }
  }
  Provenance prov = train.provenance();
  prov.kind = Provenance::Kind::kDerived;
  return {Dataset(std::move(samples), prov, train.schema()), std::move(manifest)};
}

void export_manifest_csv(const PoisonManifest& manifest, std::ostream& out) {
  out << "index,source_index,original_label,new_label\n";
  for (const auto& e : manifest.entries) {
    out << e.index << ',' << e.source_index << ',' << state_name(e.original_label) << ','
        << state_name(e.new_label) << '\n';
  }
}

Classifier corrupt_logic(const Classifier& model,
                         const std::function<void(Classifier::Params&)>& tamper) {
  Classifier::Params params = model.params();
  tamper(params);
  return Classifier(model.config(), model.scaler(), std::move(params), model.train_accuracy());
}

std::vector<PoisonRow> poisoning_experiment(const std::vector<TrainingConfig>& configs,
                                            const Dataset& ds, const std::vector<double>& rates,
                                            const std::vector<std::uint64_t>& seeds,
                                            const PoisonExperimentOptions& options) {
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0))
      throw Error(ErrorCode::kConfig, "poison rate must lie in [0, 1], got " + format_g9(r));
  }
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "poisoning experiment needs a seed");

  // Cell (config, seed, rate slot); slot 0 is the clean model.
  const std::size_t slots = rates.size() + 1;
  struct Cell {
    double accuracy = 0.0;
    std::string error;
  };
  std::vector<Cell> cells(configs.size() * seeds.size() * slots);
  detail::parallel_for(cells.size(), options.jobs, [&](std::size_t id) {
    const std::size_t slot = id % slots;
    const std::size_t si = (id / slots) % seeds.size();
    const std::size_t ci = id / (slots * seeds.size());
    const std::uint64_t seed = seeds[si];
    try {
      auto [train_set, test_set] = split(ds, SplitSpec{options.train_fraction, seed, true});
      const std::uint64_t held = test_set.checksum();
      TrainingConfig config = configs[ci];
      config.seed = seed;
      Dataset fit_on = train_set;
      if (slot > 0 && rates[slot - 1] > 0.0) {
        PoisonSpec spec;
        spec.mode = options.mode;
        spec.rate = rates[slot - 1];
        spec.seed = derive_seed(seed, 0x9015);
        spec.flip_rule = options.flip_rule;
        spec.modification_threshold = options.modification_threshold;
        fit_on = poison(train_set, spec).first;
      }
      const Classifier model = train(config, fit_on);
      if (test_set.checksum() != held)
        throw Error(ErrorCode::kInternal, "evaluation split changed during poisoning");
      cells[id].accuracy = accuracy(model, test_set);
    } catch (const std::exception& e) {
      cells[id].error = e.what();
    }
  });

  std::vector<PoisonRow> rows;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
      PoisonRow row;
      row.algorithm = configs[ci].algorithm;
      row.rate = rates[ri];
      std::vector<double> clean, poisoned, drop;
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        const Cell& c0 = cells[(ci * seeds.size() + si) * slots];
        const Cell& c1 = cells[(ci * seeds.size() + si) * slots + ri + 1];
        if (!c0.error.empty() || !c1.error.empty()) {
          if (row.error.empty()) row.error = !c0.error.empty() ? c0.error : c1.error;
          continue;
        }
        const double p = rates[ri] > 0.0 ? c1.accuracy : c0.accuracy;
        clean.push_back(c0.accuracy);
        poisoned.push_back(p);
        drop.push_back(c0.accuracy - p);
      }
      row.seeds = clean.size();
      row.clean_accuracy = median(clean);
      row.poisoned_accuracy = median(poisoned);
      row.accuracy_drop = median(drop);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace shs
