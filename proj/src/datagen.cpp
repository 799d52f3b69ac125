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

#include "shs/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "shs/format.hpp"
#include "shs/random.hpp"

namespace shs {

namespace {

// Abnormal intervals in units of the feature's normal width: 0 is normal_lo,
// 1 is normal_hi. Only marked (state, group) cells have an entry.
struct Band {
  double a;
  double b;
};

// Gap, in normal widths, between the normal range and a clear abnormal band.
constexpr double kGap = 0.8;
constexpr Band kHigh{1.0 + kGap, 2.0 + kGap};
constexpr Band kVeryHigh{1.5 + kGap, 2.5 + kGap};
constexpr Band kLow{-1.0 - kGap, -kGap};
// Overlaps the upper half of the normal range; separates near-twin states.
constexpr Band kMildHigh{0.5, 1.5};
constexpr Band kNone{0.0, 0.0};

// Columns follow SignalGroup: ECG SW BP GL BR OX SM HG AL NA HM.
constexpr std::array<std::array<Band, kNumSignalGroups>, kNumStates> kAbnormalBands = {{
    // HighBloodPressure
    {kNone, kHigh, kVeryHigh, kHigh, kNone, kLow, kHigh, kHigh, kVeryHigh, kHigh, kNone},
    // HighCholesterol
    {kNone, kHigh, kHigh, kHigh, kNone, kLow, kNone, kVeryHigh, kNone, kHigh, kNone},
    // ExcessiveSweating
    {kHigh, kVeryHigh, kHigh, kLow, kNone, kLow, kNone, kHigh, kNone, kHigh, kHigh},
    // AbnormalOxygenLevel
    {kHigh, kNone, kLow, kHigh, kHigh, kLow, kHigh, kNone, kNone, kLow, kHigh},
    // AbnormalBloodSugar: HighCholesterol plus a mild heart-rate rise and higher glucose
    {kMildHigh, kHigh, kHigh, kVeryHigh, kNone, kLow, kNone, kVeryHigh, kNone, kHigh, kNone},
    // Sleeping
    {kLow, kNone, kLow, kLow, kLow, kLow, kNone, kNone, kNone, kNone, kNone},
    // Walking
    {kHigh, kHigh, kNone, kLow, kHigh, kLow, kNone, kHigh, kNone, kHigh, kHigh},
    // Stress: HeartAttack plus a mild blood-pressure rise
    {kVeryHigh, kHigh, kMildHigh, kNone, kVeryHigh, kNone, kNone, kNone, kNone, kVeryHigh, kNone},
    // Exercise
    {kVeryHigh, kVeryHigh, kHigh, kLow, kVeryHigh, kLow, kNone, kNone, kNone, kHigh, kVeryHigh},
    // HeartAttack
    {kVeryHigh, kHigh, kNone, kNone, kVeryHigh, kNone, kNone, kNone, kNone, kVeryHigh, kNone},
    // Stroke
    {kLow, kNone, kVeryHigh, kNone, kNone, kNone, kNone, kLow, kNone, kLow, kHigh},
}};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

GeneratorSpec GeneratorSpec::defaults(std::size_t per_class, std::uint64_t seed,
                                      double noise_sigma, const FeatureSchema& schema,
                                      const CorrelationMatrix& corr) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.noise_sigma = noise_sigma;
  spec.class_counts.fill(per_class);
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto state = static_cast<PatientState>(s);
    for (const auto& f : schema.features()) {
      FeatureRule& rule = spec.rules[s][f.id];
      const SignalGroup group = corr.feature_group(f.id);
      if (corr.marked(state, group)) {
        const Band band = kAbnormalBands[s][static_cast<int>(group)];
        const double w = f.normal_width();
        rule.abnormal = true;
        rule.lo = std::max(0.0, f.normal_lo + band.a * w);
        rule.hi = f.normal_lo + band.b * w;
        // Low bands of features whose normal range starts near zero shrink
        // toward zero instead of vanishing.
        if (rule.hi <= rule.lo) {
          rule.lo = 0.0;
          rule.hi = 0.5 * f.normal_lo;
        }
      } else {
        rule.abnormal = false;
        rule.lo = f.normal_lo;
        rule.hi = f.normal_hi;
      }
    }
  }
  return spec;
}

void validate(const GeneratorSpec& spec, const FeatureSchema& schema,
              const CorrelationMatrix& corr) {
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma))
    throw Error(ErrorCode::kConfig, "noise_sigma must be a finite non-negative value");
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto state = static_cast<PatientState>(s);
    if (spec.class_counts[s] < 1)
      throw Error(ErrorCode::kConfig,
                  "class count for " + std::string(state_name(state)) + " must be >= 1");
    for (const auto& f : schema.features()) {
      const FeatureRule& rule = spec.rules[s][f.id];
      if (rule.abnormal != corr.feature_marked(state, f.id))
        throw Error(ErrorCode::kConfig,
                    "rule/correlation mismatch for state " + std::string(state_name(state)) +
                        ", feature " + f.name);
      if (!(rule.lo < rule.hi))
        throw Error(ErrorCode::kConfig, "empty sampling interval for state " +
                                            std::string(state_name(state)) + ", feature " +
                                            f.name);
    }
  }
}

Dataset generate(const GeneratorSpec& spec, const FeatureSchema& schema,
                 const CorrelationMatrix& corr) {
  validate(spec, schema, corr);
  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Sample> samples;
  samples.reserve(std::accumulate(spec.class_counts.begin(), spec.class_counts.end(),
                                  std::size_t{0}));
  for (std::size_t s = 0; s < kNumStates; ++s) {
    for (std::size_t n = 0; n < spec.class_counts[s]; ++n) {
      Sample sample;
      sample.label = static_cast<PatientState>(s);
      for (const auto& f : schema.features()) {
        const FeatureRule& rule = spec.rules[s][f.id];
        const double w = f.normal_width();
        double v = uniform(rng, rule.lo, rule.hi);
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * w * gauss(rng);
        v = std::clamp(v, f.normal_lo - 3.0 * w, f.normal_hi + 3.0 * w);
        v = std::max(v, 0.0);
        sample.values[f.id] = round_g9(v);
      }
      samples.push_back(sample);
    }
  }
  Provenance prov;
  prov.kind = Provenance::Kind::kSynthetic;
  prov.seed = spec.seed;
  return Dataset(std::move(samples), prov, schema);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (ds.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "split needs at least two samples");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must lie in (0,1)");
  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  if (spec.stratified) {
    std::array<std::vector<std::size_t>, kNumStates> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[to_index(ds[i].label)].push_back(i);
    for (std::size_t c = 0; c < kNumStates; ++c) {
      auto& idx = by_class[c];
      if (idx.empty()) continue;
      if (idx.size() < 2)
        throw Error(ErrorCode::kInvalidArgument,
                    "stratified split: class " +
                        std::string(state_name(static_cast<PatientState>(c))) +
                        " has fewer than 2 samples");
      std::shuffle(idx.begin(), idx.end(), rng);
      auto n_train = static_cast<std::size_t>(
          std::llround(spec.train_fraction * static_cast<double>(idx.size())));
      n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
      train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + n_train);
      test_idx.insert(test_idx.end(), idx.begin() + n_train, idx.end());
    }
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    std::shuffle(test_idx.begin(), test_idx.end(), rng);
  } else {
    std::vector<std::size_t> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    train_idx.assign(idx.begin(), idx.begin() + n_train);
    test_idx.assign(idx.begin() + n_train, idx.end());
  }
  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<Sample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(ds[i]);
    Provenance prov = ds.provenance();
    prov.kind = Provenance::Kind::kDerived;
    return Dataset(std::move(out), prov, ds.schema());
  };
  return {gather(train_idx), gather(test_idx)};
}

void export_csv(const Dataset& ds, std::ostream& out) {
  const auto& feats = ds.schema().features();
  for (const auto& f : feats) out << f.name << ',';
  out << "label\n";
  for (const auto& s : ds.samples()) {
    for (double v : s.values) out << format_g9(v) << ',';
    out << state_name(s.label) << '\n';
  }
}

void export_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  export_csv(ds, out);
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

Dataset ingest_csv(std::istream& in, const FeatureSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::kParse, source + ": missing header row");
  const auto header = split_csv_line(line);
  std::array<int, kNumFeatures> column_of;
  column_of.fill(-1);
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      label_col = static_cast<int>(c);
      continue;
    }
    const auto f = schema.feature_index(header[c]);
    if (!f)
      throw Error(ErrorCode::kParse, source + ": schema mismatch, unknown column '" +
                                         header[c] + "' (column " + std::to_string(c + 1) +
                                         ")");
    if (column_of[*f] != -1)
      throw Error(ErrorCode::kParse, source + ": duplicate column '" + header[c] + "'");
    column_of[*f] = static_cast<int>(c);
  }
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (column_of[f] == -1)
      throw Error(ErrorCode::kParse, source + ": schema mismatch, missing column '" +
                                         schema.feature(static_cast<int>(f)).name + "'");
  }
  if (label_col == -1) throw Error(ErrorCode::kParse, source + ": missing column 'label'");

  std::vector<Sample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(row);
    if (cells.size() != header.size())
      throw Error(ErrorCode::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, got " + std::to_string(cells.size()));
    Sample s;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const std::string& cell = cells[column_of[f]];
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw Error(ErrorCode::kParse, where + ": column '" +
                                           schema.feature(static_cast<int>(f)).name +
                                           "': invalid or non-finite value '" + cell + "'");
      s.values[f] = v;
    }
    const auto label = parse_state(cells[label_col]);
    if (!label)
      throw Error(ErrorCode::kParse,
                  where + ": column 'label': unknown label '" + cells[label_col] + "'");
    s.label = *label;
    samples.push_back(s);
  }
  if (samples.empty()) throw Error(ErrorCode::kParse, source + ": no data rows");
  Provenance prov;
  prov.kind = Provenance::Kind::kIngested;
  prov.path = source;
  return Dataset(std::move(samples), prov, schema);
}

Dataset ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return ingest_csv(in, schema, path.string());
}

Scaler fit_scaler(const Dataset& train) {
  std::array<double, kNumFeatures> lo;
  std::array<double, kNumFeatures> hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& s : train.samples()) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      lo[f] = std::min(lo[f], s.values[f]);
      hi[f] = std::max(hi[f], s.values[f]);
    }
  }
  std::string degenerate;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (!(hi[f] > lo[f])) degenerate += (degenerate.empty() ? "" : ",") +
                                   train.schema().feature(static_cast<int>(f)).name;
  }
  if (!degenerate.empty())
    throw Error(ErrorCode::kInvalidArgument, "degenerate (constant) features: " + degenerate);
  return Scaler(lo, hi);
}

}  // namespace shs
