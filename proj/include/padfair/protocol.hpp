/**
 * Copyright 2026 The padfair Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padfair/data_model.hpp"

namespace padfair {

/// Protocol 1 (gender), 2 (occlusion) and 3 (one further attribute).
/// Sub-protocol .1 trains on everything, .2 and .3 on one group only.
enum class ProtocolId { kP1_1, kP1_2, kP1_3, kP2_1, kP2_2, kP2_3, kP3 };

struct TestPartition {
  std::string label;
  std::function<bool(const SampleRecord&)> member;
};

class ProtocolSpec {
 public:
  ProtocolSpec(ProtocolId id, std::optional<Attribute> attribute = std::nullopt);

  /// "P1.1" .. "P2.3", or "P3:<attribute>" (e.g. "P3:makeup").
  static ProtocolSpec parse(std::string_view text);
  std::string name() const;

  ProtocolId id() const { return id_; }
  std::optional<Attribute> attribute() const { return attribute_; }

  /// Whether a train-split record is used for training.
  bool train_filter(const SampleRecord& record) const;

  /// Test groups, each evaluated separately.
  std::vector<TestPartition> test_partitions() const;

 private:
  ProtocolId id_;
  std::optional<Attribute> attribute_;
};

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct BalanceConfig {
  double target_ratio = 1.0;  // bona fide : attack
  double tolerance = 0.1;     // relative to target_ratio
  std::uint64_t seed = 0;
};

struct TrainTestPlan {
  std::string protocol;
  std::vector<std::string> train_ids;  // may repeat after oversampling
  std::vector<std::pair<std::string, std::vector<std::string>>> test_sets;
  std::uint64_t seed = 0;
};

/// Assigns whole subjects to train or test. Subjects are sorted, shuffled
/// with `seed`, and the first round(train_fraction * n) go to train.
/// Returned records carry the new split.
std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> identity_disjoint_split(
    std::span<const SampleRecord> records, const SplitConfig& config);

/// Sample ids with the deficient class duplicated (uniform, with replacement)
/// until the bona fide : attack ratio is within tolerance of the target.
/// Originals come first in input order, followed by the duplicates.
std::vector<std::string> oversample_balance(std::span<const SampleRecord> records, const BalanceConfig& config);

TrainTestPlan build_protocol(const SampleManifest& manifest, const ProtocolSpec& spec, const BalanceConfig& balance);

/// {"protocol", "seed", "train_ids", "test_sets"} as JSON.
std::string serialize_plan(const TrainTestPlan& plan);
TrainTestPlan parse_plan(std::string_view json);

}  // namespace padfair
