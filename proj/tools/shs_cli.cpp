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

// shs command-line front end. Talks to the toolkit only through the C API.
//
// Exit codes: 0 success, 1 a cell or library failure, 2 a usage error.
// SHS_OUTPUT_DIR, when set, is the base for relative output paths.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shs/shs.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

const char* kStateNames[SHS_NUM_STATES] = {
    "HighBloodPressure", "HighCholesterol", "ExcessiveSweating", "AbnormalOxygenLevel",
    "AbnormalBloodSugar", "Sleeping",       "Walking",           "Stress",
    "Exercise",           "HeartAttack",    "Stroke"};

// Thrown to unwind with a specific exit code after the message is printed.
struct Exit {
  int code;
};

struct DatasetDel {
  void operator()(shs_dataset* d) const { shs_dataset_free(d); }
};
struct ModelDel {
  void operator()(shs_model* m) const { shs_model_free(m); }
};
struct ReportDel {
  void operator()(shs_report* r) const { shs_report_free(r); }
};
using DatasetPtr = std::unique_ptr<shs_dataset, DatasetDel>;
using ModelPtr = std::unique_ptr<shs_model, ModelDel>;
using ReportPtr = std::unique_ptr<shs_report, ReportDel>;

void check(shs_status s, const std::string& context) {
  if (s == SHS_OK) return;
  std::cerr << "error: " << context << ": " << shs_last_error() << '\n';
  const bool usage = s == SHS_INVALID_ARGUMENT || s == SHS_IO || s == SHS_PARSE ||
                     s == SHS_CONFIG || s == SHS_CAPABILITY;
  throw Exit{usage ? kExitUsage : kExitFailure};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  shs_string_free(s);
  return out;
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  throw Exit{kExitUsage};
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) usage_error(std::string("missing --") + what);
  if (!fs::is_regular_file(path)) usage_error(std::string(what) + " not found: " + path);
}

fs::path output_path(const std::string& path) {
  const char* base = std::getenv("SHS_OUTPUT_DIR");
  const fs::path p(path);
  if (base && *base && p.is_relative()) return fs::path(base) / p;
  return p;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Common {
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  std::string format = "table";
};

// The resolved config goes to stderr when stdout carries machine-readable CSV.
std::ostream& config_stream(const Common& c) { return c.format == "csv" ? std::cerr : std::cout; }

void print_config(const Common& c, const json& config) {
  config_stream(c) << "resolved config:\n" << config.dump(2) << '\n';
}

DatasetPtr load_dataset(const std::string& path) {
  require_file(path, "data");
  shs_dataset* d = nullptr;
  check(shs_dataset_load_csv(path.c_str(), &d), "loading " + path);
  return DatasetPtr(d);
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::size_t per_class = 1546;
  double noise = 0.05;
  std::string out = "dataset.csv";
};

int run_generate(const Common& c, const GenerateArgs& a) {
  const fs::path out = output_path(a.out);
  print_config(c, {{"command", "generate"},
                   {"seed", c.seed},
                   {"per_class", a.per_class},
                   {"noise", a.noise},
                   {"out", out.string()}});
  shs_dataset* raw = nullptr;
  check(shs_dataset_generate(c.seed, a.per_class, a.noise, &raw), "generating dataset");
  DatasetPtr ds(raw);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  check(shs_dataset_save_csv(ds.get(), out.string().c_str()), "writing " + out.string());
  std::size_t n = 0;
  std::size_t counts[SHS_NUM_STATES];
  check(shs_dataset_size(ds.get(), &n), "dataset size");
  check(shs_dataset_class_counts(ds.get(), counts), "class counts");
  std::ostream& o = config_stream(c);
  o << "wrote " << n << " rows to " << out.string() << '\n';
  for (int i = 0; i < SHS_NUM_STATES; ++i) o << "  " << kStateNames[i] << ' ' << counts[i] << '\n';
  return kExitOk;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string algo = "rf";
  std::string out = "model.shs";
  double train_fraction = 0.70;
};

int run_train(const Common& c, const TrainArgs& a) {
  const fs::path out = output_path(a.out);
  print_config(c, {{"command", "train"},
                   {"seed", c.seed},
                   {"data", a.data},
                   {"algo", a.algo},
                   {"train_fraction", a.train_fraction},
                   {"out", out.string()}});
  DatasetPtr ds = load_dataset(a.data);
  shs_dataset* tr = nullptr;
  shs_dataset* te = nullptr;
  check(shs_dataset_split(ds.get(), a.train_fraction, c.seed, &tr, &te), "splitting dataset");
  DatasetPtr train_set(tr), test_set(te);
  shs_model* raw = nullptr;
  check(shs_model_train(a.algo.c_str(), train_set.get(), c.seed, &raw), "training " + a.algo);
  ModelPtr model(raw);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  check(shs_model_save(model.get(), out.string().c_str()), "writing " + out.string());
  double train_acc = 0.0, test_acc = 0.0;
  check(shs_model_accuracy(model.get(), train_set.get(), &train_acc), "train accuracy");
  check(shs_model_accuracy(model.get(), test_set.get(), &test_acc), "test accuracy");
  if (c.format == "csv") {
    std::printf("algo,train_accuracy,test_accuracy\n%s,%.2f,%.2f\n", a.algo.c_str(), train_acc,
                test_acc);
  } else {
    std::printf("train accuracy %.2f%%\ntest accuracy %.2f%%\nwrote %s\n", train_acc, test_acc,
                out.string().c_str());
  }
  return kExitOk;
}

// --- model-info --------------------------------------------------------------

int run_model_info(const Common& c, const std::string& path) {
  print_config(c, {{"command", "model-info"}, {"model", path}});
  require_file(path, "model");
  shs_model* raw = nullptr;
  check(shs_model_load(path.c_str(), &raw), "loading " + path);
  ModelPtr model(raw);
  char* info = nullptr;
  check(shs_model_info(model.get(), &info), "describing model");
  std::cout << take(info) << '\n';
  return kExitOk;
}

// --- recipes -----------------------------------------------------------------

struct RecipeArgs {
  std::string recipe;
  std::string config;
  std::string data;
  std::string out = "results";
  std::size_t num_seeds = 0;  // 0: recipe default
  std::size_t samples = 0;    // 0: recipe default
  std::vector<double> rates;
  std::string mode;
  double epsilon = -1.0;  // < 0: recipe default
};

int run_recipe(const Common& c, const RecipeArgs& a, const std::string& command) {
  json config = json::object();
  if (!a.config.empty()) {
    require_file(a.config, "config");
    try {
      config = json::parse(read_text(a.config));
    } catch (const json::parse_error& e) {
      usage_error("config " + a.config + ": " + e.what());
    }
  }
  config["recipe"] = a.recipe;
  // Resolve once to learn the recipe's seed count, then pin every seed.
  char* resolved = nullptr;
  check(shs_config_resolve(config.dump().c_str(), &resolved), "resolving config");
  const json defaults = json::parse(take(resolved));
  const std::size_t n_seeds = a.num_seeds ? a.num_seeds : defaults.at("seeds").size();
  json seeds = json::array();
  for (std::size_t i = 0; i < n_seeds; ++i) seeds.push_back(c.seed + i);
  config["seeds"] = seeds;
  if (!config.contains("dataset")) config["dataset"] = json::object();
  config["dataset"]["seed"] = c.seed;
  if (!a.data.empty()) {
    require_file(a.data, "data");
    config["dataset"]["csv"] = a.data;
  }
  if (a.samples) config["samples"] = a.samples;
  if (!a.rates.empty()) config["rates"] = a.rates;
  if (!a.mode.empty()) config["poison_mode"] = a.mode;
  if (a.epsilon >= 0.0) config["threshold"] = a.epsilon;
  config["jobs"] = c.jobs;
  config["output_dir"] = output_path(a.out).string();

  check(shs_config_resolve(config.dump().c_str(), &resolved), "resolving config");
  const std::string final_config = take(resolved);
  config_stream(c) << "command: " << command << "\nresolved config:\n" << final_config << '\n';

  shs_report* raw = nullptr;
  check(shs_run_experiment(final_config.c_str(), &raw), "running " + a.recipe);
  ReportPtr report(raw);
  char* csv = nullptr;
  check(shs_report_csv(report.get(), &csv), "report table");
  std::cout << take(csv);
  std::size_t failures = 0;
  check(shs_report_failures(report.get(), &failures), "report failures");
  if (failures > 0) {
    char* manifest = nullptr;
    check(shs_report_manifest(report.get(), &manifest), "report manifest");
    std::cerr << failures << " cell(s) failed\n" << take(manifest);
    return kExitFailure;
  }
  config_stream(c) << "outputs written to " << output_path(a.out).string() << '\n';
  return kExitOk;
}

// --- attack (single batch) -------------------------------------------------------

struct AttackArgs {
  std::string model;
  std::string data;
  std::string attack = "fgm";
  double epsilon = 0.1;
  bool unbounded = false;
  std::string target;  // empty: untargeted; "next": next class; else a state name
  std::vector<int> devices;
  std::size_t budget = 20000;
  std::size_t limit = 300;
  std::string out;
};

int run_attack(const Common& c, const AttackArgs& a) {
  int target = -1;
  if (a.target == "next") {
    target = SHS_NUM_STATES;
  } else if (!a.target.empty()) {
    for (int i = 0; i < SHS_NUM_STATES; ++i)
      if (a.target == kStateNames[i]) target = i;
    if (target < 0) usage_error("unknown target state '" + a.target + "'");
  }
  std::uint32_t mask = 0;
  for (int d : a.devices) {
    if (d < 0 || d >= 8) usage_error("device ids lie in [0, 7]");
    mask |= 1u << d;
  }
  print_config(c, {{"command", "attack"},
                   {"seed", c.seed},
                   {"model", a.model},
                   {"data", a.data},
                   {"attack", a.attack},
                   {"epsilon", a.unbounded ? json(nullptr) : json(a.epsilon)},
                   {"target", a.target.empty() ? "untargeted" : a.target},
                   {"devices", a.devices},
                   {"budget", a.budget},
                   {"limit", a.limit},
                   {"jobs", c.jobs},
                   {"out", a.out}});
  require_file(a.model, "model");
  DatasetPtr ds = load_dataset(a.data);
  shs_model* raw = nullptr;
  check(shs_model_load(a.model.c_str(), &raw), "loading " + a.model);
  ModelPtr model(raw);

  DatasetPtr slice = std::move(ds);
  if (a.limit > 0) {
    shs_dataset* head = nullptr;
    check(shs_dataset_head(slice.get(), a.limit, &head), "slicing dataset");
    slice.reset(head);
  }
  char* csv = nullptr;
  double clean = 0.0, drop = 0.0, success = 0.0;
  check(shs_attack_batch(model.get(), slice.get(), a.attack.c_str(), target,
                         a.unbounded ? -1.0 : a.epsilon, mask, a.budget, c.seed, c.jobs, &csv,
                         &clean, &drop, &success),
        "attack " + a.attack);
  const std::string per_sample = take(csv);
  if (!a.out.empty()) {
    const fs::path out = output_path(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream f(out, std::ios::binary);
    if (!f) usage_error("cannot write " + out.string());
    f << per_sample;
  }
  if (c.format == "csv") {
    std::printf("attack,clean,drop,success\n%s,%.2f,%.2f,%.2f\n", a.attack.c_str(), clean, drop,
                success);
  } else {
    std::printf("clean accuracy %.2f%%\naccuracy drop %.2f\nsuccess rate %.2f%%\n", clean, drop,
                success);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial robustness benchmark for smart healthcare classifiers"};
  app.set_version_flag("--version", std::string("shs ") + shs_version());
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", common.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "csv"}));
  };
  const std::vector<std::string> recipes{"table3", "table4", "table5", "fig4",
                                         "fig5",   "fig6",   "fig7"};

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic cohort as CSV");
  add_common(g);
  g->add_option("--per-class", gen.per_class, "Samples per state")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  g->add_option("--noise", gen.noise, "Noise sigma, in normal-range widths")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  g->add_option("--out", gen.out, "Output CSV")->capture_default_str();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a classifier on a dataset CSV");
  add_common(t);
  t->add_option("--data", tr.data, "Dataset CSV")->required();
  t->add_option("--algo", tr.algo, "Algorithm")
      ->capture_default_str()
      ->check(CLI::IsMember({"dt", "rf", "lr", "nn"}));
  t->add_option("--train-fraction", tr.train_fraction, "Training share of the split")
      ->capture_default_str();
  t->add_option("--out", tr.out, "Output model file")->capture_default_str();

  AttackArgs at;
  RecipeArgs attack_recipe;
  auto* a = app.add_subcommand("attack", "Run one attack batch, or an evasion recipe");
  add_common(a);
  a->add_option("--recipe", attack_recipe.recipe, "Evasion recipe")
      ->check(CLI::IsMember({"table4", "table5", "fig4", "fig5", "fig6", "fig7"}));
  a->add_option("--config", attack_recipe.config, "Recipe config JSON");
  a->add_option("--samples", attack_recipe.samples, "Test samples per recipe cell");
  a->add_option("--num-seeds", attack_recipe.num_seeds, "Seeds per recipe (from --seed up)");
  a->add_option("--results", attack_recipe.out, "Recipe output directory")->capture_default_str();
  a->add_option("--model", at.model, "Model file (single batch)");
  a->add_option("--data", at.data, "Dataset CSV (single batch, or recipe cohort)");
  a->add_option("--attack", at.attack, "Attack")
      ->capture_default_str()
      ->check(CLI::IsMember({"fgm", "cw", "hsj", "zoo", "tree"}));
  auto* eps = a->add_option("--epsilon", at.epsilon, "L-inf budget, fraction of feature range")
                  ->capture_default_str()
                  ->check(CLI::Range(0.0, 1.0));
  a->add_flag("--unbounded", at.unbounded, "No L-inf budget");
  a->add_option("--target", at.target, "Target state name, or 'next'");
  a->add_option("--devices", at.devices, "Allowed device ids (default: all)")->delimiter(',');
  a->add_option("--budget", at.budget, "Query budget")->capture_default_str();
  a->add_option("--limit", at.limit, "Attack the first N rows (0: all)")->capture_default_str();
  a->add_option("--out", at.out, "Per-sample results CSV");

  RecipeArgs pois;
  pois.recipe = "table3";
  auto* p = app.add_subcommand("poison", "Poisoning experiment grid");
  add_common(p);
  p->add_option("--rates", pois.rates, "Poisoning rates")->delimiter(',');
  p->add_option("--mode", pois.mode, "Poisoning mode")
      ->check(CLI::IsMember({"label_flip", "injection", "modification"}));
  p->add_option("--config", pois.config, "Recipe config JSON");
  p->add_option("--data", pois.data, "Dataset CSV (default: synthetic cohort)");
  p->add_option("--num-seeds", pois.num_seeds, "Seeds (from --seed up)");
  p->add_option("--out", pois.out, "Output directory")->capture_default_str();

  RecipeArgs rep;
  auto* r = app.add_subcommand("report", "Run any recipe and write CSV, SVG and manifest");
  add_common(r);
  r->add_option("--recipe", rep.recipe, "Recipe")->required()->check(CLI::IsMember(recipes));
  r->add_option("--config", rep.config, "Recipe config JSON");
  r->add_option("--data", rep.data, "Dataset CSV (default: synthetic cohort)");
  r->add_option("--samples", rep.samples, "Test samples per attack cell");
  r->add_option("--num-seeds", rep.num_seeds, "Seeds (from --seed up)");
  r->add_option("--out", rep.out, "Output directory")->capture_default_str();

  std::string model_path;
  auto* m = app.add_subcommand("model-info", "Describe a saved model");
  add_common(m);
  m->add_option("--model", model_path, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return run_generate(common, gen);
    if (t->parsed()) return run_train(common, tr);
    if (m->parsed()) return run_model_info(common, model_path);
    if (p->parsed()) return run_recipe(common, pois, "poison");
    if (r->parsed()) return run_recipe(common, rep, "report");
    if (a->parsed()) {
      if (!attack_recipe.recipe.empty()) {
        if (!eps->empty()) attack_recipe.epsilon = at.epsilon;
        attack_recipe.data = at.data;
        return run_recipe(common, attack_recipe, "attack");
      }
      return run_attack(common, at);
    }
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
