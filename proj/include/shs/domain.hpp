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

// Shared domain types of the smart-healthcare benchmark: the 15-feature /
// 8-device schema, the 11 patient states, the device-activity correlation
// table, labeled datasets and the min/max scaler.

#ifndef SHS_DOMAIN_HPP_
#define SHS_DOMAIN_HPP_

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shs/error.hpp"

namespace shs {

inline constexpr std::size_t kNumFeatures = 15;
inline constexpr std::size_t kNumDevices = 8;
inline constexpr std::size_t kNumStates = 11;
inline constexpr std::size_t kNumSignalGroups = 11;

using DeviceId = int;
using FeatureMask = std::bitset<kNumFeatures>;
using DeviceSet = std::bitset<kNumDevices>;

// Dense 0-10 encoding; the order is also the confusion-matrix order.
enum class PatientState : int {
  kHighBloodPressure = 0,
  kHighCholesterol = 1,
  kExcessiveSweating = 2,
  kAbnormalOxygenLevel = 3,
  kAbnormalBloodSugar = 4,
  kSleeping = 5,
  kWalking = 6,
  kStress = 7,
  kExercise = 8,
  kHeartAttack = 9,
  kStroke = 10,
};

inline constexpr int to_index(PatientState s) { return static_cast<int>(s); }
PatientState state_from_index(int index);
std::string_view state_name(PatientState s);
// Case-insensitive; accepts the canonical names returned by state_name().
std::optional<PatientState> parse_state(std::string_view name);

// Table II column groups.
enum class SignalGroup : int {
  kECG = 0,
  kSW,
  kBP,
  kGL,
  kBR,
  kOX,
  kSM,
  kHG,
  kAL,
  kNA,
  kHM,
};

std::string_view signal_group_name(SignalGroup g);

struct FeatureDef {
  int id = 0;
  std::string name;
  std::string unit;
  double normal_lo = 0.0;
  double normal_hi = 1.0;
  DeviceId device = 0;

  double normal_width() const { return normal_hi - normal_lo; }
};

struct DeviceDef {
  DeviceId id = 0;
  std::string name;
  std::vector<int> feature_ids;
};

class FeatureSchema {
 public:
  // Validates the partition invariants; throws Error(kConfig) on violation.
  FeatureSchema(std::vector<FeatureDef> features, std::vector<DeviceDef> devices);

  const std::vector<FeatureDef>& features() const { return features_; }
  const std::vector<DeviceDef>& devices() const { return devices_; }
  const FeatureDef& feature(int id) const { return features_.at(id); }
  const DeviceDef& device(DeviceId id) const { return devices_.at(id); }

  std::optional<int> feature_index(std::string_view name) const;
  std::optional<DeviceId> device_index(std::string_view name) const;

  // Features owned by the given devices.
  FeatureMask mask_for(const DeviceSet& devices) const;
  // Devices owning at least one feature in the mask.
  DeviceSet devices_for(const FeatureMask& mask) const;

  bool operator==(const FeatureSchema&) const;

 private:
  std::vector<FeatureDef> features_;
  std::vector<DeviceDef> devices_;
};

bool operator==(const FeatureDef&, const FeatureDef&);
bool operator==(const DeviceDef&, const DeviceDef&);

const FeatureSchema& default_schema();

// Well-known device ids of the default schema.
namespace devices {
inline constexpr DeviceId kQuadioArm = 0;      // heart rate, blood pressure
inline constexpr DeviceId kInsulinPump = 1;    // glucose
inline constexpr DeviceId kPulseOximeter = 2;  // blood oxygen
inline constexpr DeviceId kQuardioCore = 3;    // breathing, sweating
inline constexpr DeviceId kAlcoholMonitor = 4;
inline constexpr DeviceId kHemoglobinMeter = 5;
inline constexpr DeviceId kEegHeadset = 6;
inline constexpr DeviceId kSmartwatch = 7;  // sleep, motion
}  // namespace devices

class CorrelationMatrix {
 public:
  static constexpr int kVersion = 1;

  bool marked(PatientState s, SignalGroup g) const {
    return cells_[to_index(s)][static_cast<int>(g)];
  }
  // True when the feature belongs to a group marked for the state.
  bool feature_marked(PatientState s, int feature_id) const;
  const std::vector<int>& group_features(SignalGroup g) const {
    return group_features_[static_cast<int>(g)];
  }
  SignalGroup feature_group(int feature_id) const;

  std::size_t rows() const { return kNumStates; }
  std::size_t cols() const { return kNumSignalGroups; }

 private:
  friend const CorrelationMatrix& correlation_matrix();
  CorrelationMatrix() = default;

  std::array<std::array<bool, kNumSignalGroups>, kNumStates> cells_{};
  std::array<std::vector<int>, kNumSignalGroups> group_features_;
};

const CorrelationMatrix& correlation_matrix();

// Versioned text rendering of schema + correlation table.
std::string export_schema_document(const FeatureSchema& schema,
                                   const CorrelationMatrix& corr);

using VitalVector = std::array<double, kNumFeatures>;

struct Sample {
  VitalVector values{};
  PatientState label = PatientState::kHighBloodPressure;

  bool operator==(const Sample&) const = default;
};

struct Provenance {
  enum class Kind { kSynthetic, kIngested, kDerived };
  Kind kind = Kind::kSynthetic;
  std::uint64_t seed = 0;
  std::string path;

  bool operator==(const Provenance&) const = default;
};

class Dataset {
 public:
  // Throws Error(kInvalidArgument) for empty input or non-finite values.
  Dataset(std::vector<Sample> samples, Provenance provenance,
          const FeatureSchema& schema = default_schema());

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  const Provenance& provenance() const { return provenance_; }

  std::array<std::size_t, kNumStates> class_counts() const;
  // FNV-1a over the raw sample bytes; used to check a split stays untouched.
  std::uint64_t checksum() const;

  bool operator==(const Dataset& other) const {
    return samples_ == other.samples_ && schema_ == other.schema_;
  }

 private:
  FeatureSchema schema_;
  std::vector<Sample> samples_;
  Provenance provenance_;
};

// Per-feature min/max of a training split. Normalized coordinates are
// (v - lo) / (hi - lo); values outside the training range map outside [0,1].
class Scaler {
 public:
  Scaler() = default;
  Scaler(std::array<double, kNumFeatures> lo, std::array<double, kNumFeatures> hi);

  static Scaler identity();

  const std::array<double, kNumFeatures>& lo() const { return lo_; }
  const std::array<double, kNumFeatures>& hi() const { return hi_; }
  double range(int feature) const { return hi_[feature] - lo_[feature]; }

  std::vector<double> transform(const VitalVector& v) const;
  VitalVector inverse(std::span<const double> z) const;

  bool operator==(const Scaler&) const = default;

 private:
  std::array<double, kNumFeatures> lo_{};
  std::array<double, kNumFeatures> hi_{};
};

}  // namespace shs

#endif  // SHS_DOMAIN_HPP_
