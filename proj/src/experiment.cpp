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

// Recipe runner. Every seed drives one split, the training runs on it and the
// attack randomness; the cohort itself is fixed by the dataset fields.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "shs/error.hpp"
#include "shs/format.hpp"
#include "shs/harness.hpp"
#include "shs/random.hpp"
#include "shs/stats.hpp"
#include "shs/version.hpp"
#include "svg.hpp"

namespace shs {

using nlohmann::json;

namespace {

constexpr std::array<Recipe, 7> kRecipes{Recipe::kTable3, Recipe::kTable4, Recipe::kTable5,
                                         Recipe::kFig4,   Recipe::kFig5,   Recipe::kFig6,
                                         Recipe::kFig7};

bool targeted_recipe(Recipe r) { return r == Recipe::kFig4 || r == Recipe::kFig6; }
bool device_recipe(Recipe r) { return r == Recipe::kFig4 || r == Recipe::kFig5; }

}  // namespace

std::string_view recipe_name(Recipe r) {
  switch (r) {
    case Recipe::kTable3: return "table3";
    case Recipe::kTable4: return "table4";
    case Recipe::kTable5: return "table5";
    case Recipe::kFig4: return "fig4";
    case Recipe::kFig5: return "fig5";
    case Recipe::kFig6: return "fig6";
    case Recipe::kFig7: return "fig7";
  }
  return "?";
}

std::optional<Recipe> parse_recipe(std::string_view name) {
  for (Recipe r : kRecipes)
    if (recipe_name(r) == name) return r;
  return std::nullopt;
}

std::vector<Recipe> all_recipes() { return {kRecipes.begin(), kRecipes.end()}; }

ExperimentConfig ExperimentConfig::defaults(Recipe recipe) {
  ExperimentConfig c;
  c.recipe = recipe;
  switch (recipe) {
    case Recipe::kTable3:
      c.seeds = {42, 43, 44, 45, 46};
      break;
    case Recipe::kTable4:
      c.seeds = {42};
      c.threshold = std::numeric_limits<double>::infinity();
      break;
    case Recipe::kTable5:
      break;
    case Recipe::kFig4:
    case Recipe::kFig5:
      c.samples = 150;
      c.threshold = 0.2;
      break;
    case Recipe::kFig6:
    case Recipe::kFig7:
      c.seeds = {42, 43, 44, 45, 46};
      c.samples = 150;
      break;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, what); };
  if (c.dataset_csv.empty() && c.per_class == 0) fail("dataset.per_class must be positive");
  if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) fail("dataset.noise must be non-negative");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
    fail("train_fraction must lie in (0, 1)");
  for (const TrainingConfig& t : c.training) validate(t);
  if (c.seeds.empty()) fail("seeds must list at least one seed");
  if (c.samples == 0) fail("samples must be positive");
  if (c.pairings.empty()) fail("pairings must not be empty");
  for (const Pairing& p : c.pairings) {
    if (!attack_supports(p.attack, p.model)) {
      fail("pairing " + std::string(attack_name(p.attack)) + ":" +
           std::string(algorithm_name(p.model)) + " is not supported");
    }
  }
  if (!(c.threshold >= 0.0)) fail("threshold must be non-negative");
  for (double t : c.thresholds)
    if (!(t > 0.0 && t <= 1.0)) fail("thresholds must lie in (0, 1]");
  for (DeviceId d : c.removal_order)
    if (d < 0 || d >= static_cast<DeviceId>(kNumDevices)) fail("removal_order: unknown device");
  for (double r : c.rates)
    if (!(r >= 0.0 && r <= 1.0)) fail("rates must lie in [0, 1]");
  if (c.device_samples == 0) fail("device_samples must be positive");
  if (c.query_budget == 0) fail("query_budget must be positive");
  if (c.jobs == 0) fail("jobs must be positive");
}

// --- JSON ------------------------------------------------------------------

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw Error(ErrorCode::kConfig, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::kConfig, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

json threshold_json(double t) { return std::isfinite(t) ? json(t) : json(nullptr); }

double threshold_from(const json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

template <typename T, typename Parse>
T resolve(const json& v, Parse parse, const char* what) {
  const std::string name = v.get<std::string>();
  const auto parsed = parse(name);
  if (!parsed) throw Error(ErrorCode::kConfig, std::string("unknown ") + what + " '" + name + "'");
  return *parsed;
}

json models_json(const std::array<TrainingConfig, 4>& t) {
  const TrainingConfig& dt = t[0];
  const TrainingConfig& rf = t[1];
  const TrainingConfig& lr = t[2];
  const TrainingConfig& nn = t[3];
  return json{
      {"dt", {{"max_depth", dt.tree.max_depth}, {"min_leaf", dt.tree.min_leaf}}},
      {"rf",
       {{"n_trees", rf.forest.n_trees},
        {"feature_subsample", rf.forest.feature_subsample},
        {"max_depth", rf.forest.max_depth},
        {"min_leaf", rf.forest.min_leaf}}},
      {"lr",
       {{"learning_rate", lr.logistic.learning_rate},
        {"epochs", lr.logistic.epochs},
        {"l2", lr.logistic.l2}}},
      {"nn",
       {{"hidden", nn.nn.hidden},
        {"activation", nn.nn.activation == Activation::kRelu ? "relu" : "tanh"},
        {"learning_rate", nn.nn.learning_rate},
        {"epochs", nn.nn.epochs},
        {"batch_size", nn.nn.batch_size}}},
  };
}

void models_from(const json& m, std::array<TrainingConfig, 4>& t) {
  check_keys(m, "models", {"dt", "rf", "lr", "nn"});
  if (m.contains("dt")) {
    const json& j = m.at("dt");
    check_keys(j, "models.dt", {"max_depth", "min_leaf"});
    read(j, "max_depth", t[0].tree.max_depth);
    read(j, "min_leaf", t[0].tree.min_leaf);
  }
  if (m.contains("rf")) {
    const json& j = m.at("rf");
    check_keys(j, "models.rf", {"n_trees", "feature_subsample", "max_depth", "min_leaf"});
    read(j, "n_trees", t[1].forest.n_trees);
    read(j, "feature_subsample", t[1].forest.feature_subsample);
    read(j, "max_depth", t[1].forest.max_depth);
    read(j, "min_leaf", t[1].forest.min_leaf);
  }
  if (m.contains("lr")) {
    const json& j = m.at("lr");
    check_keys(j, "models.lr", {"learning_rate", "epochs", "l2"});
    read(j, "learning_rate", t[2].logistic.learning_rate);
    read(j, "epochs", t[2].logistic.epochs);
    read(j, "l2", t[2].logistic.l2);
  }
  if (m.contains("nn")) {
    const json& j = m.at("nn");
    check_keys(j, "models.nn", {"hidden", "activation", "learning_rate", "epochs", "batch_size"});
    read(j, "hidden", t[3].nn.hidden);
    if (j.contains("activation")) {
      const std::string a = j.at("activation").get<std::string>();
      if (a == "relu") {
        t[3].nn.activation = Activation::kRelu;
      } else if (a == "tanh") {
        t[3].nn.activation = Activation::kTanh;
      } else {
        throw Error(ErrorCode::kConfig, "unknown activation '" + a + "'");
      }
    }
    read(j, "learning_rate", t[3].nn.learning_rate);
    read(j, "epochs", t[3].nn.epochs);
    read(j, "batch_size", t[3].nn.batch_size);
  }
}

json params_json(const AttackParams& p) {
  return json{
      {"cw",
       {{"kappa", p.cw.kappa},
        {"binary_steps", p.cw.binary_steps},
        {"c_initial", p.cw.c_initial},
        {"c_max", p.cw.c_max},
        {"iterations", p.cw.iterations},
        {"learning_rate", p.cw.learning_rate},
        {"pullback_steps", p.cw.pullback_steps}}},
      {"hsj",
       {{"iterations", p.hsj.iterations},
        {"initial_evals", p.hsj.initial_evals},
        {"max_evals", p.hsj.max_evals},
        {"tolerance", p.hsj.tolerance},
        {"restarts", p.hsj.restarts},
        {"gamma", p.hsj.gamma}}},
      {"zoo",
       {{"h", p.zoo.h},
        {"beta1", p.zoo.beta1},
        {"beta2", p.zoo.beta2},
        {"learning_rate", p.zoo.learning_rate},
        {"kappa", p.zoo.kappa},
        {"h_max", p.zoo.h_max}}},
      {"tree", {{"offset", p.tree.offset}}},
  };
}

void params_from(const json& j, AttackParams& p) {
  check_keys(j, "attack_params", {"cw", "hsj", "zoo", "tree"});
  if (j.contains("cw")) {
    const json& c = j.at("cw");
    check_keys(c, "attack_params.cw",
               {"kappa", "binary_steps", "c_initial", "c_max", "iterations", "learning_rate",
                "pullback_steps"});
    read(c, "kappa", p.cw.kappa);
    read(c, "binary_steps", p.cw.binary_steps);
    read(c, "c_initial", p.cw.c_initial);
    read(c, "c_max", p.cw.c_max);
    read(c, "iterations", p.cw.iterations);
    read(c, "learning_rate", p.cw.learning_rate);
    read(c, "pullback_steps", p.cw.pullback_steps);
  }
  if (j.contains("hsj")) {
    const json& h = j.at("hsj");
    check_keys(h, "attack_params.hsj",
               {"iterations", "initial_evals", "max_evals", "tolerance", "restarts", "gamma"});
    read(h, "iterations", p.hsj.iterations);
    read(h, "initial_evals", p.hsj.initial_evals);
    read(h, "max_evals", p.hsj.max_evals);
    read(h, "tolerance", p.hsj.tolerance);
    read(h, "restarts", p.hsj.restarts);
    read(h, "gamma", p.hsj.gamma);
  }
  if (j.contains("zoo")) {
    const json& z = j.at("zoo");
    check_keys(z, "attack_params.zoo", {"h", "beta1", "beta2", "learning_rate", "kappa", "h_max"});
    read(z, "h", p.zoo.h);
    read(z, "beta1", p.zoo.beta1);
    read(z, "beta2", p.zoo.beta2);
    read(z, "learning_rate", p.zoo.learning_rate);
    read(z, "kappa", p.zoo.kappa);
    read(z, "h_max", p.zoo.h_max);
  }
  if (j.contains("tree")) {
    const json& t = j.at("tree");
    check_keys(t, "attack_params.tree", {"offset"});
    read(t, "offset", p.tree.offset);
  }
}

json config_json(const ExperimentConfig& c) {
  json pairings = json::array();
  for (const Pairing& p : c.pairings)
    pairings.push_back({{"attack", attack_name(p.attack)}, {"model", algorithm_name(p.model)}});
  json thresholds = json::array();
  for (double t : c.thresholds) thresholds.push_back(t);
  json removal = json::array();
  for (DeviceId d : c.removal_order) removal.push_back(default_schema().device(d).name);
  json pairs = json::array();
  for (const StatePair& s : c.state_pairs)
    pairs.push_back({{"current", state_name(s.current)}, {"final", state_name(s.final_state)}});
  return json{
      {"recipe", recipe_name(c.recipe)},
      {"dataset",
       {{"per_class", c.per_class},
        {"seed", c.dataset_seed},
        {"noise", c.noise},
        {"csv", c.dataset_csv}}},
      {"train_fraction", c.train_fraction},
      {"models", models_json(c.training)},
      {"seeds", c.seeds},
      {"samples", c.samples},
      {"pairings", pairings},
      {"threshold", threshold_json(c.threshold)},
      {"thresholds", thresholds},
      {"removal_order", removal},
      {"rates", c.rates},
      {"poison_mode", poison_mode_name(c.poison_mode)},
      {"state_pairs", pairs},
      {"device_samples", c.device_samples},
      {"query_budget", c.query_budget},
      {"attack_params", params_json(c.params)},
      {"jobs", c.jobs},
      {"output_dir", c.output_dir.string()},
  };
}

}  // namespace

std::string to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  try {
    check_keys(j, "config",
               {"recipe", "dataset", "train_fraction", "models", "seeds", "samples", "pairings",
                "threshold", "thresholds", "removal_order", "rates", "poison_mode",
                "state_pairs", "device_samples", "query_budget", "attack_params", "jobs",
                "output_dir"});
    Recipe recipe = Recipe::kTable5;
    if (j.contains("recipe")) recipe = resolve<Recipe>(j.at("recipe"), parse_recipe, "recipe");
    ExperimentConfig c = ExperimentConfig::defaults(recipe);
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      check_keys(d, "dataset", {"per_class", "seed", "noise", "csv"});
      read(d, "per_class", c.per_class);
      read(d, "seed", c.dataset_seed);
      read(d, "noise", c.noise);
      read(d, "csv", c.dataset_csv);
    }
    read(j, "train_fraction", c.train_fraction);
    if (j.contains("models")) models_from(j.at("models"), c.training);
    read(j, "seeds", c.seeds);
    read(j, "samples", c.samples);
    if (j.contains("pairings")) {
      c.pairings.clear();
      for (const json& p : j.at("pairings")) {
        check_keys(p, "pairings[]", {"attack", "model"});
        c.pairings.push_back({resolve<AttackKind>(p.at("attack"), parse_attack, "attack"),
                              resolve<Algorithm>(p.at("model"), parse_algorithm, "model")});
      }
    }
    if (j.contains("threshold")) c.threshold = threshold_from(j.at("threshold"));
    read(j, "thresholds", c.thresholds);
    if (j.contains("removal_order")) {
      c.removal_order.clear();
      for (const json& d : j.at("removal_order")) {
        c.removal_order.push_back(resolve<DeviceId>(
            d, [](const std::string& n) { return default_schema().device_index(n); }, "device"));
      }
    }
    read(j, "rates", c.rates);
    if (j.contains("poison_mode"))
      c.poison_mode = resolve<PoisonMode>(j.at("poison_mode"), parse_poison_mode, "poison mode");
    if (j.contains("state_pairs")) {
      c.state_pairs.clear();
      for (const json& s : j.at("state_pairs")) {
        check_keys(s, "state_pairs[]", {"current", "final"});
        c.state_pairs.push_back({resolve<PatientState>(s.at("current"), parse_state, "state"),
                                 resolve<PatientState>(s.at("final"), parse_state, "state")});
      }
    }
    read(j, "device_samples", c.device_samples);
    read(j, "query_budget", c.query_budget);
    if (j.contains("attack_params")) params_from(j.at("attack_params"), c.params);
    read(j, "jobs", c.jobs);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  json j = config_json(config);
  j.erase("output_dir");
  j.erase("jobs");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out += c;
        continue;
      }
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

// --- Runner ----------------------------------------------------------------

namespace {

std::string fixed(double v) { return format_fixed(v, 2); }

const TrainingConfig& training_for(const ExperimentConfig& c, Algorithm a) {
  return c.training[static_cast<std::size_t>(a)];
}

Dataset load_cohort(const ExperimentConfig& c) {
  if (!c.dataset_csv.empty()) return ingest_csv(std::filesystem::path(c.dataset_csv));
  return generate(GeneratorSpec::defaults(c.per_class, c.dataset_seed, c.noise));
}

Dataset head(const Dataset& ds, std::size_t n) {
  n = std::min(n, ds.size());
  std::vector<Sample> s(ds.samples().begin(), ds.samples().begin() + n);
  return Dataset(std::move(s), ds.provenance(), ds.schema());
}

std::string cell_name(const Pairing& p, std::uint64_t seed) {
  return std::string(attack_name(p.attack)) + ":" + std::string(algorithm_name(p.model)) +
         " seed " + std::to_string(seed);
}

std::string device_list(const DeviceSet& s) {
  std::string out;
  for (const DeviceDef& d : default_schema().devices()) {
    if (!s.test(d.id)) continue;
    if (!out.empty()) out += ';';
    out += d.name;
  }
  return out;
}

// Lists the first failing sample of a batch, if any.
void note_errors(const std::vector<CraftResult>& results, const std::string& cell,
                 std::vector<std::string>& failures) {
  for (const CraftResult& r : results) {
    if (!r.error.empty()) {
      failures.push_back(cell + ": sample " + std::to_string(r.index) + ": " + r.error);
      return;
    }
  }
}

struct SeedSplit {
  Dataset train;
  Dataset test;
};

SeedSplit split_for(const Dataset& cohort, const ExperimentConfig& c, std::uint64_t seed) {
  auto [tr, te] = split(cohort, SplitSpec{c.train_fraction, seed, true});
  return {std::move(tr), std::move(te)};
}

Classifier train_for(const ExperimentConfig& c, Algorithm a, const Dataset& train_set,
                     std::uint64_t seed) {
  TrainingConfig t = training_for(c, a);
  t.seed = seed;
  return train(t, train_set);
}

BatchOptions batch_options(const ExperimentConfig& c, std::uint64_t seed, const Dataset* pool) {
  BatchOptions b;
  b.seed = seed;
  b.params = c.params;
  b.jobs = c.jobs;
  b.start_pool = pool;
  return b;
}

void run_table3(const ExperimentConfig& c, const Dataset& cohort, ExperimentReport& rep) {
  std::vector<TrainingConfig> configs(c.training.begin(), c.training.end());
  PoisonExperimentOptions o;
  o.mode = c.poison_mode;
  o.train_fraction = c.train_fraction;
  o.jobs = c.jobs;
  rep.poisoning = poisoning_experiment(configs, cohort, c.rates, c.seeds, o);
  rep.table.header = {"model", "clean"};
  for (double r : c.rates) rep.table.header.push_back("drop_" + format_g9(r));
  detail::Chart chart{detail::Chart::Kind::kBar, "Poisoning accuracy drop", "model",
                      "accuracy drop (pp)", {}, {}};
  for (double r : c.rates) chart.series.push_back({format_g9(100 * r) + "% poisoned", {}});
  for (std::size_t a = 0; a < configs.size(); ++a) {
    const Algorithm alg = configs[a].algorithm;
    std::vector<std::string> row{std::string(algorithm_label(alg))};
    chart.categories.push_back(row[0]);
    for (std::size_t ri = 0; ri < c.rates.size(); ++ri) {
      const PoisonRow& pr = rep.poisoning[a * c.rates.size() + ri];
      if (ri == 0) row.push_back(fixed(pr.clean_accuracy));
      row.push_back(fixed(pr.accuracy_drop));
      chart.series[ri].values.push_back(pr.accuracy_drop);
      if (!pr.error.empty()) {
        rep.failures.push_back(std::string(algorithm_name(alg)) + " rate " + format_g9(pr.rate) +
                               ": " + pr.error);
      }
    }
    if (c.rates.empty()) row.push_back("");
    rep.table.rows.push_back(std::move(row));
  }
  rep.svg = detail::render_svg(chart);
}

void run_table4(const ExperimentConfig& c, const Dataset& cohort, ExperimentReport& rep) {
  const std::uint64_t seed = c.seeds.front();
  const SeedSplit s = split_for(cohort, c, seed);
  const Classifier dt = train_for(c, Algorithm::kDecisionTree, s.train, seed);
  AttackConstraints base;
  base.threshold = c.threshold;
  base.query_budget = c.query_budget;

  rep.table.header = {"current", "final",      "searched",   "feasible",
                      "one_device", "min_devices", "typical_devices"};
  detail::Chart chart{detail::Chart::Kind::kBar, "Minimal compromised devices", "state pair",
                      "devices", {}, {{"min devices", {}}, {"1-device samples", {}}}};
  for (const StatePair& pair : c.state_pairs) {
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < s.test.size() && sources.size() < c.device_samples; ++i) {
      const Sample& x = s.test[i];
      if (x.label == pair.current && dt.predict(x.values) == pair.current) sources.push_back(i);
    }
    std::vector<DeviceSearchResult> found(sources.size());
    detail::parallel_for(sources.size(), c.jobs, [&](std::size_t k) {
      CraftOptions o;
      o.reference = pair.current;
      o.seed = derive_seed(seed, sources[k]);
      o.params = c.params;
      found[k] = minimal_device_search(dt, s.test[sources[k]].values,
                                       AttackGoal::toward(pair.final_state),
                                       AttackKind::kDecisionTree, SearchStrategy::kExhaustive,
                                       base, o);
    });
    DeviceRow row;
    row.pair = pair;
    row.searched = sources.size();
    std::map<unsigned long, std::size_t> freq;
    for (const DeviceSearchResult& f : found) {
      if (!f.feasible) continue;
      ++row.feasible;
      const std::size_t n = f.devices.count();
      row.one_device += n == 1;
      row.min_devices = row.min_devices == 0 ? n : std::min(row.min_devices, n);
      ++freq[f.devices.to_ulong()];
    }
    std::size_t best = 0;
    for (const auto& [bits, count] : freq) {
      if (count > best) {
        best = count;
        row.typical = DeviceSet(bits);
      }
    }
    rep.table.rows.push_back({std::string(state_name(pair.current)),
                              std::string(state_name(pair.final_state)),
                              std::to_string(row.searched), std::to_string(row.feasible),
                              std::to_string(row.one_device), std::to_string(row.min_devices),
                              device_list(row.typical)});
    chart.categories.push_back(std::string(state_name(pair.current)) + ">" +
                               std::string(state_name(pair.final_state)));
    chart.series[0].values.push_back(static_cast<double>(row.min_devices));
    chart.series[1].values.push_back(static_cast<double>(row.one_device));
    rep.devices.push_back(row);
  }
  rep.svg = detail::render_svg(chart);
}

void run_table5(const ExperimentConfig& c, const Dataset& cohort, ExperimentReport& rep) {
  AttackConstraints base;
  base.threshold = c.threshold;
  base.query_budget = c.query_budget;
  std::vector<std::vector<double>> clean(c.pairings.size()), drop(c.pairings.size()),
      success(c.pairings.size());
  for (std::uint64_t seed : c.seeds) {
    const SeedSplit s = split_for(cohort, c, seed);
    const Dataset slice = head(s.test, c.samples);
    for (std::size_t pi = 0; pi < c.pairings.size(); ++pi) {
      const Pairing& p = c.pairings[pi];
      try {
        const Classifier victim = train_for(c, p.model, s.train, seed);
        const double acc = evaluate(victim, slice).accuracy;
        const BatchOptions bo = batch_options(c, seed, &s.train);
        const auto ua = batch_attack(victim, slice, BatchGoal::untargeted(), base, p.attack, bo);
        const auto ta = batch_attack(victim, slice, BatchGoal::next_class(), base, p.attack, bo);
        note_errors(ua, cell_name(p, seed) + " untargeted", rep.failures);
        note_errors(ta, cell_name(p, seed) + " targeted", rep.failures);
        clean[pi].push_back(acc);
        drop[pi].push_back(attack_metrics(ua, acc).accuracy_drop);
        success[pi].push_back(attack_metrics(ta, acc).success_rate);
      } catch (const std::exception& e) {
        rep.failures.push_back(cell_name(p, seed) + ": " + e.what());
      }
    }
  }
  rep.table.header = {"capability", "attack", "model", "clean", "drop", "success"};
  detail::Chart chart{detail::Chart::Kind::kBar, "Evasion attacks", "attack on model", "percent",
                      {}, {{"accuracy drop (UA)", {}}, {"success rate (TA)", {}}}};
  for (std::size_t pi = 0; pi < c.pairings.size(); ++pi) {
    const Pairing& p = c.pairings[pi];
    AttackRow row{p, median(clean[pi]), median(drop[pi]), median(success[pi])};
    rep.attacks.push_back(row);
    // ZOO is the only attack run without any knowledge of the model internals.
    const std::string capability = p.attack == AttackKind::kZoo ? "black-box" : "white-box";
    rep.table.rows.push_back({capability, std::string(attack_label(p.attack)),
                              std::string(algorithm_label(p.model)), fixed(row.clean),
                              fixed(row.drop), fixed(row.success)});
    chart.categories.push_back(std::string(attack_label(p.attack)) + "/" +
                               std::string(algorithm_label(p.model)));
    chart.series[0].values.push_back(row.drop);
    chart.series[1].values.push_back(row.success);
  }
  rep.svg = detail::render_svg(chart);
}

void run_sweep(const ExperimentConfig& c, const Dataset& cohort, ExperimentReport& rep) {
  const bool targeted = targeted_recipe(c.recipe);
  const bool devices = device_recipe(c.recipe);
  std::vector<double> steps;
  if (devices) {
    for (std::size_t k = 0; k <= c.removal_order.size(); ++k) steps.push_back(double(k));
  } else {
    steps = c.thresholds;
  }
  const BatchGoal goal = targeted ? BatchGoal::next_class() : BatchGoal::untargeted();
  // values[pairing][step] over seeds
  std::vector<std::vector<std::vector<double>>> values(
      c.pairings.size(), std::vector<std::vector<double>>(steps.size()));
  for (std::uint64_t seed : c.seeds) {
    const SeedSplit s = split_for(cohort, c, seed);
    const Dataset slice = head(s.test, c.samples);
    for (std::size_t pi = 0; pi < c.pairings.size(); ++pi) {
      const Pairing& p = c.pairings[pi];
      try {
        const Classifier victim = train_for(c, p.model, s.train, seed);
        SweepOptions o;
        o.base.threshold = c.threshold;
        o.base.query_budget = c.query_budget;
        o.batch = batch_options(c, seed, &s.train);
        const std::vector<SweepRow> rows =
            devices ? device_reduction_sweep(victim, slice, goal, {p.attack}, c.removal_order, o)
                    : threshold_sweep(victim, slice, goal, {p.attack}, c.thresholds, o);
        for (std::size_t k = 0; k < rows.size(); ++k) {
          const Metrics& m = rows[k].metrics;
          values[pi][k].push_back(targeted ? m.success_rate : m.accuracy_drop);
          if (!rows[k].error.empty()) {
            rep.failures.push_back(cell_name(p, seed) + " step " + format_g9(rows[k].step) +
                                   ": " + rows[k].error);
          }
        }
      } catch (const std::exception& e) {
        rep.failures.push_back(cell_name(p, seed) + ": " + e.what());
      }
    }
  }
  const std::string step_col = devices ? "devices_removed" : "threshold";
  const std::string metric_col = targeted ? "success" : "drop";
  rep.table.header = {"attack", "model", step_col, metric_col};
  detail::Chart chart{detail::Chart::Kind::kLine,
                      std::string(devices ? "Device reduction" : "Threshold budget") +
                          (targeted ? ", targeted" : ", untargeted"),
                      devices ? "devices removed" : "threshold (fraction of range)",
                      targeted ? "success rate (%)" : "accuracy drop (pp)",
                      {},
                      {}};
  for (double st : steps) chart.categories.push_back(format_g9(st));
  for (std::size_t pi = 0; pi < c.pairings.size(); ++pi) {
    const Pairing& p = c.pairings[pi];
    SweepSummary summary{p, steps, {}};
    detail::Series series{std::string(attack_label(p.attack)) + "/" +
                              std::string(algorithm_label(p.model)),
                          {}};
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const double v = median(values[pi][k]);
      summary.values.push_back(v);
      series.values.push_back(v);
      rep.table.rows.push_back({std::string(attack_name(p.attack)),
                                std::string(algorithm_name(p.model)), format_g9(steps[k]),
                                fixed(v)});
    }
    rep.sweeps.push_back(std::move(summary));
    chart.series.push_back(std::move(series));
  }
  rep.svg = detail::render_svg(chart);
}

std::string manifest_text(const ExperimentConfig& c, const ExperimentReport& rep) {
  std::ostringstream o;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(c)));
  o << "shsbench " << kVersion << '\n';
  o << "recipe " << recipe_name(c.recipe) << '\n';
  o << "config_hash " << hash << '\n';
  o << "seeds";
  for (std::uint64_t s : c.seeds) o << ' ' << s;
  o << '\n';
  if (c.dataset_csv.empty()) {
    o << "dataset synthetic per_class=" << c.per_class << " seed=" << c.dataset_seed
      << " noise=" << format_g9(c.noise) << '\n';
  } else {
    o << "dataset csv " << c.dataset_csv << '\n';
  }
  o << "outputs metrics_" << recipe_name(c.recipe) << ".csv plot_" << recipe_name(c.recipe)
    << ".svg\n";
  o << "failed_cells " << rep.failures.size() << '\n';
  for (const std::string& f : rep.failures) o << "failure " << f << '\n';
  return o.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentReport rep;
  rep.recipe = config.recipe;
  const Dataset cohort = load_cohort(config);
  switch (config.recipe) {
    case Recipe::kTable3: run_table3(config, cohort, rep); break;
    case Recipe::kTable4: run_table4(config, cohort, rep); break;
    case Recipe::kTable5: run_table5(config, cohort, rep); break;
    default: run_sweep(config, cohort, rep); break;
  }
  rep.manifest = manifest_text(config, rep);
  if (!config.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + config.output_dir.string());
    const std::string name(recipe_name(config.recipe));
    write_file(config.output_dir / ("metrics_" + name + ".csv"), rep.table.csv());
    write_file(config.output_dir / ("plot_" + name + ".svg"), rep.svg);
    write_file(config.output_dir / "manifest.txt", rep.manifest);
  }
  return rep;
}

}  // namespace shs
