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

#include "padfair/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "padfair/error.hpp"
#include "padfair/random.hpp"

namespace padfair {

namespace {

bool is_gender(const SampleRecord& r, Gender g) { return r.attributes.gender == g; }

std::optional<bool> occluded(const SampleRecord& r) {
  const auto& a = r.attributes;
  if (!a.beard || !a.eyeglasses || !a.bangs) return std::nullopt;
  return derive_occlusion(a);
}

}  // namespace

ProtocolSpec::ProtocolSpec(ProtocolId id, std::optional<Attribute> attribute) : id_(id), attribute_(attribute) {
  if ((id == ProtocolId::kP3) != attribute.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "an attribute is required for protocol 3 and only for it");
  }
}

ProtocolSpec ProtocolSpec::parse(std::string_view text) {
  static const std::pair<std::string_view, ProtocolId> kNamed[] = {
      {"P1.1", ProtocolId::kP1_1}, {"P1.2", ProtocolId::kP1_2}, {"P1.3", ProtocolId::kP1_3},
      {"P2.1", ProtocolId::kP2_1}, {"P2.2", ProtocolId::kP2_2}, {"P2.3", ProtocolId::kP2_3}};
  for (const auto& [name, id] : kNamed) {
    if (text == name) return ProtocolSpec(id);
  }
  if (text.starts_with("P3:")) {
    if (auto a = parse_attribute(text.substr(3))) return ProtocolSpec(ProtocolId::kP3, *a);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown protocol '" + std::string(text) + "' (expected P1.1-P1.3, P2.1-P2.3 or P3:<attribute>)");
}

std::string ProtocolSpec::name() const {
  switch (id_) {
    case ProtocolId::kP1_1: return "P1.1";
    case ProtocolId::kP1_2: return "P1.2";
    case ProtocolId::kP1_3: return "P1.3";
    case ProtocolId::kP2_1: return "P2.1";
    case ProtocolId::kP2_2: return "P2.2";
    case ProtocolId::kP2_3: return "P2.3";
    case ProtocolId::kP3: return "P3:" + std::string(to_string(*attribute_));
  }
  return {};
}

bool ProtocolSpec::train_filter(const SampleRecord& record) const {
  switch (id_) {
    case ProtocolId::kP1_1:
    case ProtocolId::kP2_1:
    case ProtocolId::kP3:
      return true;
    case ProtocolId::kP1_2: return is_gender(record, Gender::kFemale);
    case ProtocolId::kP1_3: return is_gender(record, Gender::kMale);
    case ProtocolId::kP2_2: return occluded(record) == true;
    case ProtocolId::kP2_3: return occluded(record) == false;
  }
  return false;
}

std::vector<TestPartition> ProtocolSpec::test_partitions() const {
  switch (id_) {
    case ProtocolId::kP1_1:
    case ProtocolId::kP1_2:
    case ProtocolId::kP1_3:
      return {{"male", [](const SampleRecord& r) { return is_gender(r, Gender::kMale); }},
              {"female", [](const SampleRecord& r) { return is_gender(r, Gender::kFemale); }}};
    case ProtocolId::kP2_1:
    case ProtocolId::kP2_2:
    case ProtocolId::kP2_3:
      return {{"occlusion", [](const SampleRecord& r) { return occluded(r) == true; }},
              {"non_occlusion", [](const SampleRecord& r) { return occluded(r) == false; }}};
    case ProtocolId::kP3: {
      const Attribute a = *attribute_;
      const std::string n(to_string(a));
      return {{n, [a](const SampleRecord& r) { return r.attributes.get(a) == true; }},
              {"no_" + n, [a](const SampleRecord& r) { return r.attributes.get(a) == false; }}};
    }
  }
  return {};
}

std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> identity_disjoint_split(
    std::span<const SampleRecord> records, const SplitConfig& config) {
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  std::set<std::string> unique;
  for (const auto& r : records) unique.insert(r.subject_id);
  if (unique.size() < 2) throw Error(ErrorCode::kInvalidArgument, "identity-disjoint split needs at least two subjects");

  std::vector<std::string> subjects(unique.begin(), unique.end());
  Rng rng(config.seed);
  for (std::size_t i = subjects.size() - 1; i > 0; --i) std::swap(subjects[i], subjects[rng.index(i + 1)]);

  const auto n = subjects.size();
  auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  const std::set<std::string> train_subjects(subjects.begin(), subjects.begin() + static_cast<long>(n_train));

  std::vector<SampleRecord> train, test;
  for (const auto& r : records) {
    SampleRecord copy = r;
    if (train_subjects.contains(r.subject_id)) {
      copy.split = Split::kTrain;
      train.push_back(std::move(copy));
    } else {
      copy.split = Split::kTest;
      test.push_back(std::move(copy));
    }
  }
  return {std::move(train), std::move(test)};
}

std::vector<std::string> oversample_balance(std::span<const SampleRecord> records, const BalanceConfig& config) {
  if (!(config.target_ratio > 0.0) || !(config.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "balance target must be positive and tolerance non-negative");
  }
  std::vector<std::size_t> bonafide, attack;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (records[i].pad_label == PadLabel::kAttack ? attack : bonafide).push_back(i);
  }
  if (bonafide.empty() || attack.empty()) {
    throw Error(ErrorCode::kEmptySelection,
                std::string("cannot balance: no ") + (bonafide.empty() ? "bona fide" : "attack") + " samples");
  }

  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.sample_id);

  const double nb = static_cast<double>(bonafide.size());
  const double na = static_cast<double>(attack.size());
  const double target = config.target_ratio;
  const double slack = config.tolerance * target;
  if (std::abs(nb / na - target) <= slack) return out;

  // Grow the deficient class to the count that puts the ratio on target.
  const bool grow_bonafide = nb / na < target;
  const auto& pool = grow_bonafide ? bonafide : attack;
  const double wanted = grow_bonafide ? std::round(target * na) : std::round(nb / target);
  const auto extra = static_cast<std::size_t>(std::max(0.0, wanted - static_cast<double>(pool.size())));

  Rng rng(config.seed);
  for (std::size_t k = 0; k < extra; ++k) out.push_back(records[pool[rng.index(pool.size())]].sample_id);
  return out;
}

TrainTestPlan build_protocol(const SampleManifest& manifest, const ProtocolSpec& spec, const BalanceConfig& balance) {
  const auto overlap = split_subject_overlap(manifest.records);
  if (!overlap.empty()) {
    throw Error(ErrorCode::kSplitOverlap, std::to_string(overlap.size()) +
                                              " subject(s) appear in both train and test, e.g. '" + overlap.front() +
                                              "'");
  }

  std::vector<SampleRecord> train;
  for (const auto& r : manifest.records) {
    if (r.split == Split::kTrain && spec.train_filter(r)) train.push_back(r);
  }
  if (train.empty()) {
    throw Error(ErrorCode::kEmptySelection, "protocol " + spec.name() + " selects no training samples");
  }

  TrainTestPlan plan;
  plan.protocol = spec.name();
  plan.seed = balance.seed;
  plan.train_ids = oversample_balance(train, balance);

  for (const auto& part : spec.test_partitions()) {
    std::vector<std::string> ids;
    for (const auto& r : manifest.records) {
      if (r.split == Split::kTest && part.member(r)) ids.push_back(r.sample_id);
    }
    if (ids.empty()) {
      throw Error(ErrorCode::kEmptySelection,
                  "protocol " + spec.name() + ": test partition '" + part.label + "' has no samples");
    }
    plan.test_sets.emplace_back(part.label, std::move(ids));
  }
  return plan;
}

std::string serialize_plan(const TrainTestPlan& plan) {
  nlohmann::ordered_json j;
  j["protocol"] = plan.protocol;
  j["seed"] = plan.seed;
  j["train_ids"] = plan.train_ids;
  nlohmann::ordered_json tests = nlohmann::ordered_json::object();
  for (const auto& [label, ids] : plan.test_sets) tests[label] = ids;
  j["test_sets"] = std::move(tests);
  return j.dump(2) + "\n";
}

TrainTestPlan parse_plan(std::string_view json) {
  try {
    const auto j = nlohmann::ordered_json::parse(json);
    TrainTestPlan plan;
    plan.protocol = j.at("protocol").get<std::string>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    for (const auto& [label, ids] : j.at("test_sets").items()) {
      plan.test_sets.emplace_back(label, ids.get<std::vector<std::string>>());
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid plan JSON: ") + e.what());
  }
}

}  // namespace padfair
