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

// No C++ exception crosses this boundary: every entry point funnels through
// guard(), which maps Error codes onto shs_status one to one.

#include "shs/shs.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "shs/attacks.hpp"
#include "shs/datagen.hpp"
#include "shs/error.hpp"
#include "shs/harness.hpp"
#include "shs/models.hpp"
#include "shs/poisoning.hpp"
#include "shs/version.hpp"

struct shs_dataset {
  shs::Dataset value;
};

struct shs_model {
  shs::Classifier value;
};

struct shs_report {
  shs::ExperimentReport value;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
shs_status guard(F&& body) {
  try {
    body();
    return SHS_OK;
  } catch (const shs::Error& e) {
    g_last_error = e.what();
    return static_cast<shs_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SHS_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SHS_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SHS_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw shs::Error(shs::ErrorCode::kInvalidArgument, what);
}

void put_string(const std::string& s, char** out) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  *out = p;
}

}  // namespace

extern "C" {

const char* shs_version(void) { return shs::kVersion; }

const char* shs_last_error(void) { return g_last_error.c_str(); }

void shs_string_free(char* s) { std::free(s); }

shs_status shs_dataset_generate(uint64_t seed, size_t per_class, double noise,
                                shs_dataset** out) {
  return guard([&] {
    require(out != nullptr, "out must not be null");
    *out = new shs_dataset{shs::generate(shs::GeneratorSpec::defaults(per_class, seed, noise))};
  });
}

shs_status shs_dataset_load_csv(const char* path, shs_dataset** out) {
  return guard([&] {
    require(path && out, "path and out must not be null");
    *out = new shs_dataset{shs::ingest_csv(std::filesystem::path(path))};
  });
}

shs_status shs_dataset_save_csv(const shs_dataset* ds, const char* path) {
  return guard([&] {
    require(ds && path, "dataset and path must not be null");
    shs::export_csv(ds->value, std::filesystem::path(path));
  });
}

shs_status shs_dataset_split(const shs_dataset* ds, double train_fraction, uint64_t seed,
                             shs_dataset** train, shs_dataset** test) {
  return guard([&] {
    require(ds && train && test, "dataset and outputs must not be null");
    auto [tr, te] = shs::split(ds->value, shs::SplitSpec{train_fraction, seed, true});
    auto* a = new shs_dataset{std::move(tr)};
    *test = new shs_dataset{std::move(te)};
    *train = a;
  });
}

shs_status shs_dataset_head(const shs_dataset* ds, size_t n, shs_dataset** out) {
  return guard([&] {
    require(ds && out, "dataset and out must not be null");
    require(n > 0, "n must be positive");
    const auto& all = ds->value.samples();
    std::vector<shs::Sample> head(all.begin(), all.begin() + std::min(n, all.size()));
    *out = new shs_dataset{shs::Dataset(std::move(head), ds->value.provenance(), ds->value.schema())};
  });
}

shs_status shs_dataset_size(const shs_dataset* ds, size_t* out) {
  return guard([&] {
    require(ds && out, "dataset and out must not be null");
    *out = ds->value.size();
  });
}

shs_status shs_dataset_class_counts(const shs_dataset* ds, size_t* counts) {
  return guard([&] {
    require(ds && counts, "dataset and counts must not be null");
    const auto c = ds->value.class_counts();
    for (std::size_t i = 0; i < shs::kNumStates; ++i) counts[i] = c[i];
  });
}

void shs_dataset_free(shs_dataset* ds) { delete ds; }

shs_status shs_model_train(const char* algorithm, const shs_dataset* train, uint64_t seed,
                           shs_model** out) {
  return guard([&] {
    require(algorithm && train && out, "algorithm, dataset and out must not be null");
    const auto alg = shs::parse_algorithm(algorithm);
    if (!alg) {
      throw shs::Error(shs::ErrorCode::kInvalidArgument,
                       std::string("unknown algorithm '") + algorithm + "' (dt, rf, lr, nn)");
    }
    *out = new shs_model{shs::train(shs::TrainingConfig::defaults(*alg, seed), train->value)};
  });
}

shs_status shs_model_save(const shs_model* m, const char* path) {
  return guard([&] {
    require(m && path, "model and path must not be null");
    m->value.save(std::filesystem::path(path));
  });
}

shs_status shs_model_load(const char* path, shs_model** out) {
  return guard([&] {
    require(path && out, "path and out must not be null");
    *out = new shs_model{shs::Classifier::load(std::filesystem::path(path))};
  });
}

shs_status shs_model_accuracy(const shs_model* m, const shs_dataset* ds, double* out) {
  return guard([&] {
    require(m && ds && out, "model, dataset and out must not be null");
    *out = shs::accuracy(m->value, ds->value);
  });
}

shs_status shs_model_info(const shs_model* m, char** out) {
  return guard([&] {
    require(m && out, "model and out must not be null");
    put_string(m->value.describe(), out);
  });
}

shs_status shs_model_predict(const shs_model* m, const double* x, int* label) {
  return guard([&] {
    require(m && x && label, "model, x and label must not be null");
    shs::VitalVector v;
    for (std::size_t i = 0; i < shs::kNumFeatures; ++i) v[i] = x[i];
    *label = shs::to_index(m->value.predict(v));
  });
}

void shs_model_free(shs_model* m) { delete m; }

shs_status shs_attack_batch(const shs_model* m, const shs_dataset* slice, const char* attack,
                            int target, double threshold, uint32_t device_mask,
                            size_t query_budget, uint64_t seed, size_t jobs, char** csv,
                            double* clean_accuracy, double* accuracy_drop,
                            double* success_rate) {
  return guard([&] {
    require(m && slice && attack, "model, slice and attack must not be null");
    const auto kind = shs::parse_attack(attack);
    if (!kind) {
      throw shs::Error(shs::ErrorCode::kInvalidArgument,
                       std::string("unknown attack '") + attack + "' (fgm, cw, hsj, zoo, tree)");
    }
    require(target <= static_cast<int>(shs::kNumStates), "target out of range");
    shs::BatchGoal goal = shs::BatchGoal::untargeted();
    if (target == static_cast<int>(shs::kNumStates)) {
      goal = shs::BatchGoal::next_class();
    } else if (target >= 0) {
      goal = shs::BatchGoal::fixed(shs::state_from_index(target));
    }
    shs::AttackConstraints c;
    if (threshold >= 0.0) c.threshold = threshold;
    if (device_mask != 0) {
      require(device_mask < (1u << shs::kNumDevices), "device mask names an unknown device");
      c.mask = shs::default_schema().mask_for(shs::DeviceSet(device_mask));
    }
    c.query_budget = query_budget;
    shs::validate(c);
    shs::BatchOptions o;
    o.seed = seed;
    o.jobs = jobs == 0 ? 1 : jobs;
    const auto results = shs::batch_attack(m->value, slice->value, goal, c, *kind, o);
    const double clean = shs::evaluate(m->value, slice->value).accuracy;
    const shs::Metrics metrics = shs::attack_metrics(results, clean);
    if (csv) {
      std::ostringstream s;
      shs::export_results_csv(results, s, slice->value.schema());
      put_string(s.str(), csv);
    }
    if (clean_accuracy) *clean_accuracy = metrics.clean_accuracy;
    if (accuracy_drop) *accuracy_drop = metrics.accuracy_drop;
    if (success_rate) *success_rate = metrics.success_rate;
  });
}

shs_status shs_poison(const shs_dataset* train, const char* mode, double rate, uint64_t seed,
                      shs_dataset** out, char** manifest_csv) {
  return guard([&] {
    require(train && mode && out, "dataset, mode and out must not be null");
    const auto pm = shs::parse_poison_mode(mode);
    if (!pm) {
      throw shs::Error(shs::ErrorCode::kInvalidArgument,
                       std::string("unknown poison mode '") + mode + "'");
    }
    shs::PoisonSpec spec;
    spec.mode = *pm;
    spec.rate = rate;
    spec.seed = seed;
    auto [poisoned, manifest] = shs::poison(train->value, spec);
    std::string text;
    if (manifest_csv) {
      std::ostringstream s;
      shs::export_manifest_csv(manifest, s);
      text = s.str();
    }
    *out = new shs_dataset{std::move(poisoned)};
    if (manifest_csv) put_string(text, manifest_csv);
  });
}

shs_status shs_config_resolve(const char* config_json, char** out) {
  return guard([&] {
    require(config_json && out, "config and out must not be null");
    put_string(shs::to_json(shs::config_from_json(config_json)), out);
  });
}

shs_status shs_run_experiment(const char* config_json, shs_report** out) {
  return guard([&] {
    require(config_json && out, "config and out must not be null");
    *out = new shs_report{shs::run_experiment(shs::config_from_json(config_json))};
  });
}

shs_status shs_report_csv(const shs_report* r, char** out) {
  return guard([&] {
    require(r && out, "report and out must not be null");
    put_string(r->value.table.csv(), out);
  });
}

shs_status shs_report_svg(const shs_report* r, char** out) {
  return guard([&] {
    require(r && out, "report and out must not be null");
    put_string(r->value.svg, out);
  });
}

shs_status shs_report_manifest(const shs_report* r, char** out) {
  return guard([&] {
    require(r && out, "report and out must not be null");
    put_string(r->value.manifest, out);
  });
}

shs_status shs_report_failures(const shs_report* r, size_t* out) {
  return guard([&] {
    require(r && out, "report and out must not be null");
    *out = r->value.failures.size();
  });
}

void shs_report_free(shs_report* r) { delete r; }

}  // extern "C"
