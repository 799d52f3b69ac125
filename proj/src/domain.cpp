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

#include "shs/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>

#include "shs/format.hpp"

namespace shs {

namespace {

constexpr std::array<std::string_view, kNumStates> kStateNames = {
    "HighBloodPressure", "HighCholesterol", "ExcessiveSweating",
    "AbnormalOxygenLevel", "AbnormalBloodSugar", "Sleeping",
    "Walking", "Stress", "Exercise", "HeartAttack", "Stroke"};

constexpr std::array<std::string_view, kNumSignalGroups> kGroupNames = {
    "ECG", "SW", "BP", "GL", "BR", "OX", "SM", "HG", "AL", "NA", "HM"};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

// Signal group of each feature of the default schema.
constexpr std::array<SignalGroup, kNumFeatures> kFeatureGroups = {
    SignalGroup::kECG,  // heart_rate
    SignalGroup::kBP,   // systolic_bp
    SignalGroup::kBP,   // diastolic_bp
    SignalGroup::kGL,   // glucose
    SignalGroup::kOX,   // spo2
    SignalGroup::kBR,   // breathing_rate
    SignalGroup::kSW,   // sweating_rate
    SignalGroup::kAL,   // blood_alcohol
    SignalGroup::kHG,   // hemoglobin
    SignalGroup::kNA,   // eeg_delta
    SignalGroup::kNA,   // eeg_theta
    SignalGroup::kNA,   // eeg_alpha
    SignalGroup::kNA,   // eeg_beta
    SignalGroup::kSM,   // sleep_stage
    SignalGroup::kHM,   // motion_intensity
};

}  // namespace

PatientState state_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kNumStates))
    throw Error(ErrorCode::kInvalidArgument,
                "patient state index out of range: " + std::to_string(index));
  return static_cast<PatientState>(index);
}

std::string_view state_name(PatientState s) { return kStateNames.at(to_index(s)); }

std::optional<PatientState> parse_state(std::string_view name) {
  for (std::size_t i = 0; i < kNumStates; ++i) {
    if (iequals(name, kStateNames[i])) return static_cast<PatientState>(i);
  }
  return std::nullopt;
}

std::string_view signal_group_name(SignalGroup g) {
  return kGroupNames.at(static_cast<int>(g));
}

bool operator==(const FeatureDef& a, const FeatureDef& b) {
  return a.id == b.id && a.name == b.name && a.unit == b.unit &&
         a.normal_lo == b.normal_lo && a.normal_hi == b.normal_hi &&
         a.device == b.device;
}

bool operator==(const DeviceDef& a, const DeviceDef& b) {
  return a.id == b.id && a.name == b.name && a.feature_ids == b.feature_ids;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDef> features,
                             std::vector<DeviceDef> devices)
    : features_(std::move(features)), devices_(std::move(devices)) {
  if (features_.size() != kNumFeatures)
    throw Error(ErrorCode::kConfig, "schema must have exactly 15 features");
  if (devices_.size() != kNumDevices)
    throw Error(ErrorCode::kConfig, "schema must have exactly 8 devices");
  std::array<int, kNumFeatures> owner;
  owner.fill(-1);
  for (std::size_t d = 0; d < devices_.size(); ++d) {
    const DeviceDef& dev = devices_[d];
    if (dev.id != static_cast<DeviceId>(d))
      throw Error(ErrorCode::kConfig, "device ids must be dense and ordered");
    if (dev.feature_ids.empty())
      throw Error(ErrorCode::kConfig, "device '" + dev.name + "' owns no feature");
    for (int f : dev.feature_ids) {
      if (f < 0 || f >= static_cast<int>(kNumFeatures))
        throw Error(ErrorCode::kConfig, "device feature index out of range");
      if (owner[f] != -1)
        throw Error(ErrorCode::kConfig,
                    "feature " + std::to_string(f) + " owned by two devices");
      owner[f] = dev.id;
    }
  }
  for (std::size_t f = 0; f < features_.size(); ++f) {
    const FeatureDef& def = features_[f];
    if (def.id != static_cast<int>(f))
      throw Error(ErrorCode::kConfig, "feature ids must be dense and ordered");
    if (!(def.normal_lo < def.normal_hi))
      throw Error(ErrorCode::kConfig, "feature '" + def.name + "' has empty normal range");
    if (owner[f] == -1 || owner[f] != def.device)
      throw Error(ErrorCode::kConfig,
                  "feature '" + def.name + "' device ownership is inconsistent");
  }
}

std::optional<int> FeatureSchema::feature_index(std::string_view name) const {
  for (const auto& f : features_)
    if (f.name == name) return f.id;
  return std::nullopt;
}

std::optional<DeviceId> FeatureSchema::device_index(std::string_view name) const {
  for (const auto& d : devices_)
    if (iequals(d.name, name)) return d.id;
  return std::nullopt;
}

FeatureMask FeatureSchema::mask_for(const DeviceSet& devs) const {
  FeatureMask mask;
  for (const auto& d : devices_) {
    if (!devs.test(d.id)) continue;
    for (int f : d.feature_ids) mask.set(f);
  }
  return mask;
}

DeviceSet FeatureSchema::devices_for(const FeatureMask& mask) const {
  DeviceSet out;
  for (const auto& f : features_)
    if (mask.test(f.id)) out.set(f.device);
  return out;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
  return features_ == other.features_ && devices_ == other.devices_;
}

const FeatureSchema& default_schema() {
  using namespace devices;
  static const FeatureSchema schema(
      {
          {0, "heart_rate", "bpm", 60.0, 100.0, kQuadioArm},
          {1, "systolic_bp", "mmHg", 90.0, 120.0, kQuadioArm},
          {2, "diastolic_bp", "mmHg", 60.0, 80.0, kQuadioArm},
          {3, "glucose", "mg/dl", 70.0, 130.0, kInsulinPump},
          {4, "spo2", "%", 94.0, 100.0, kPulseOximeter},
          {5, "breathing_rate", "breaths/min", 12.0, 20.0, kQuardioCore},
          {6, "sweating_rate", "uL/min/cm2", 0.1, 0.5, kQuardioCore},
          {7, "blood_alcohol", "g/dl", 0.0, 0.08, kAlcoholMonitor},
          {8, "hemoglobin", "g/dl", 12.3, 17.5, kHemoglobinMeter},
          {9, "eeg_delta", "Hz", 0.5, 4.0, kEegHeadset},
          {10, "eeg_theta", "Hz", 4.0, 8.0, kEegHeadset},
          {11, "eeg_alpha", "Hz", 8.0, 12.0, kEegHeadset},
          {12, "eeg_beta", "Hz", 16.0, 24.0, kEegHeadset},
          {13, "sleep_stage", "score", 0.0, 1.0, kSmartwatch},
          {14, "motion_intensity", "g", 0.0, 0.5, kSmartwatch},
      },
      {
          {kQuadioArm, "QuadioArm", {0, 1, 2}},
          {kInsulinPump, "InsulinPump", {3}},
          {kPulseOximeter, "PulseOximeter", {4}},
          {kQuardioCore, "QuardioCore", {5, 6}},
          {kAlcoholMonitor, "AlcoholMonitor", {7}},
          {kHemoglobinMeter, "HemoglobinMeter", {8}},
          {kEegHeadset, "EegHeadset", {9, 10, 11, 12}},
          {kSmartwatch, "Smartwatch", {13, 14}},
      });
  return schema;
}

bool CorrelationMatrix::feature_marked(PatientState s, int feature_id) const {
  return marked(s, feature_group(feature_id));
}

SignalGroup CorrelationMatrix::feature_group(int feature_id) const {
  return kFeatureGroups.at(feature_id);
}

const CorrelationMatrix& correlation_matrix() {
  static const CorrelationMatrix matrix = [] {
    // Columns: ECG SW BP GL BR OX SM HG AL NA HM
    constexpr std::array<std::string_view, kNumStates> rows = {
        "01110111110",  // HighBloodPressure
        "01110101010",  // HighCholesterol
        "11110101011",  // ExcessiveSweating
        "10111110011",  // AbnormalOxygenLevel
        "11110101010",  // AbnormalBloodSugar
        "10111100000",  // Sleeping
        "11011101011",  // Walking
        "11101000010",  // Stress
        "11111100011",  // Exercise
        "11001000010",  // HeartAttack
        "10100001011",  // Stroke
    };
    CorrelationMatrix m;
    for (std::size_t s = 0; s < kNumStates; ++s)
      for (std::size_t g = 0; g < kNumSignalGroups; ++g)
        m.cells_[s][g] = rows[s][g] == '1';
    for (std::size_t f = 0; f < kNumFeatures; ++f)
      m.group_features_[static_cast<int>(kFeatureGroups[f])].push_back(static_cast<int>(f));
    return m;
  }();
  return matrix;
}

std::string export_schema_document(const FeatureSchema& schema,
                                   const CorrelationMatrix& corr) {
  std::ostringstream out;
  out << "# shs-schema v" << CorrelationMatrix::kVersion << "\n";
  out << "[features]\n";
  out << "id,name,unit,normal_lo,normal_hi,device\n";
  for (const auto& f : schema.features()) {
    out << f.id << ',' << f.name << ',' << f.unit << ',' << format_g9(f.normal_lo)
        << ',' << format_g9(f.normal_hi) << ',' << schema.device(f.device).name
        << '\n';
  }
  out << "[devices]\n";
  out << "id,name,features\n";
  for (const auto& d : schema.devices()) {
    out << d.id << ',' << d.name << ',';
    for (std::size_t i = 0; i < d.feature_ids.size(); ++i)
      out << (i ? ";" : "") << schema.feature(d.feature_ids[i]).name;
    out << '\n';
  }
  out << "[correlation]\n";
  out << "state";
  for (std::size_t g = 0; g < kNumSignalGroups; ++g)
    out << ',' << signal_group_name(static_cast<SignalGroup>(g));
  out << '\n';
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto state = static_cast<PatientState>(s);
    out << state_name(state);
    for (std::size_t g = 0; g < kNumSignalGroups; ++g)
      out << ',' << (corr.marked(state, static_cast<SignalGroup>(g)) ? 1 : 0);
    out << '\n';
  }
  out << "[groups]\n";
  out << "group,features\n";
  for (std::size_t g = 0; g < kNumSignalGroups; ++g) {
    const auto group = static_cast<SignalGroup>(g);
    out << signal_group_name(group) << ',';
    const auto& feats = corr.group_features(group);
    for (std::size_t i = 0; i < feats.size(); ++i)
      out << (i ? ";" : "") << schema.feature(feats[i]).name;
    out << '\n';
  }
  return out.str();
}

Dataset::Dataset(std::vector<Sample> samples, Provenance provenance,
                 const FeatureSchema& schema)
    : schema_(schema), samples_(std::move(samples)), provenance_(std::move(provenance)) {
  if (samples_.empty())
    throw Error(ErrorCode::kInvalidArgument, "dataset must not be empty");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    for (double v : samples_[i].values) {
      if (!std::isfinite(v))
        throw Error(ErrorCode::kInvalidArgument,
                    "non-finite feature value in sample " + std::to_string(i));
    }
    const int label = to_index(samples_[i].label);
    if (label < 0 || label >= static_cast<int>(kNumStates))
      throw Error(ErrorCode::kInvalidArgument,
                  "label out of range in sample " + std::to_string(i));
  }
}

std::array<std::size_t, kNumStates> Dataset::class_counts() const {
  std::array<std::size_t, kNumStates> counts{};
  for (const auto& s : samples_) ++counts[to_index(s.label)];
  return counts;
}

std::uint64_t Dataset::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& s : samples_) {
    mix(s.values.data(), sizeof(double) * s.values.size());
    const int label = to_index(s.label);
    mix(&label, sizeof(label));
  }
  return h;
}

Scaler::Scaler(std::array<double, kNumFeatures> lo, std::array<double, kNumFeatures> hi)
    : lo_(lo), hi_(hi) {
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (!(hi_[f] > lo_[f]))
      throw Error(ErrorCode::kInvalidArgument,
                  "scaler range is degenerate for feature " + std::to_string(f));
  }
}

Scaler Scaler::identity() {
  std::array<double, kNumFeatures> lo{};
  std::array<double, kNumFeatures> hi;
  hi.fill(1.0);
  return Scaler(lo, hi);
}

std::vector<double> Scaler::transform(const VitalVector& v) const {
  std::vector<double> z(kNumFeatures);
  for (std::size_t f = 0; f < kNumFeatures; ++f) z[f] = (v[f] - lo_[f]) / (hi_[f] - lo_[f]);
  return z;
}

VitalVector Scaler::inverse(std::span<const double> z) const {
  if (z.size() != kNumFeatures)
    throw Error(ErrorCode::kInvalidArgument, "normalized vector must have 15 entries");
  VitalVector v;
  for (std::size_t f = 0; f < kNumFeatures; ++f) v[f] = lo_[f] + z[f] * (hi_[f] - lo_[f]);
  return v;
}

}  // namespace shs
