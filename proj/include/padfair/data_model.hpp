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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace padfair {

enum class PadLabel { kBonaFide, kAttack };
enum class Gender { kMale, kFemale };
enum class Split { kTrain, kTest };

std::string_view to_string(PadLabel label);
std::string_view to_string(Gender gender);
std::string_view to_string(Split split);
std::optional<PadLabel> parse_pad_label(std::string_view text);

/// The six boolean attributes (gender is handled separately).
enum class Attribute { kBangs, kBeard, kEyeglasses, kMakeup, kLongHair, kStraightHair };

std::string_view to_string(Attribute attribute);
std::optional<Attribute> parse_attribute(std::string_view text);
inline constexpr Attribute kAllAttributes[] = {
    Attribute::kBangs,  Attribute::kBeard,    Attribute::kEyeglasses,
    Attribute::kMakeup, Attribute::kLongHair, Attribute::kStraightHair};

/// Annotated traits of one sample. Unknown values stay empty.
struct AttributeSet {
  std::optional<Gender> gender;
  std::optional<bool> bangs;
  std::optional<bool> beard;
  std::optional<bool> eyeglasses;
  std::optional<bool> makeup;
  std::optional<bool> long_hair;
  std::optional<bool> straight_hair;

  std::optional<bool> get(Attribute attribute) const;
  void set(Attribute attribute, std::optional<bool> value);

  bool operator==(const AttributeSet&) const = default;
};

struct SampleRecord {
  std::string sample_id;
  std::string subject_id;
  std::optional<std::string> media_path;
  PadLabel pad_label = PadLabel::kBonaFide;
  std::optional<std::string> attack_type;
  AttributeSet attributes;
  Split split = Split::kTrain;

  bool operator==(const SampleRecord&) const = default;
};

struct SampleManifest {
  std::vector<SampleRecord> records;
  /// Subjects present in both splits, sorted. Non-empty means the manifest
  /// is not identity-disjoint; parsing still succeeds so callers can repair.
  std::vector<std::string> split_overlap;

  bool identity_disjoint() const { return split_overlap.empty(); }
  const SampleRecord* find(std::string_view sample_id) const;
};

/// Parses the JSON Lines manifest format. Throws padfair::Error.
SampleManifest parse_manifest(std::istream& input);
SampleManifest parse_manifest_string(std::string_view text);
SampleManifest load_manifest(const std::string& path);

/// Inverse of parse_manifest: one JSON object per line, record order kept.
std::string serialize_manifest(const SampleManifest& manifest);

/// Subject ids that appear in both the train and the test split.
std::vector<std::string> split_subject_overlap(std::span<const SampleRecord> records);

/// beard OR eyeglasses OR bangs. All three must be annotated.
bool derive_occlusion(const AttributeSet& attributes);

/// Evenly spaced frame positions: floor(i * frame_count / n), de-duplicated.
std::vector<std::int64_t> frame_indices(std::int64_t frame_count, std::int64_t n);

// ---------------------------------------------------------------------------
// Scores

/// Named set of disjoint groups, e.g. gender = {male, female}.
class GroupPartition {
 public:
  GroupPartition(std::string name, std::vector<std::string> groups);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool contains(std::string_view group) const;

  bool operator==(const GroupPartition&) const = default;

 private:
  std::string name_;
  std::vector<std::string> groups_;
};

/// Partitions derivable from manifest attributes: "gender", "occlusion", or
/// one of the six boolean attributes.
GroupPartition standard_partition(std::string_view name);
std::vector<std::string> standard_partition_names();

/// Group id of `attributes` under a standard partition, if annotated.
std::optional<std::string> standard_group(std::string_view partition,
                                          const AttributeSet& attributes);

struct ScoreRecord {
  std::string sample_id;
  double score = 0.0;  // attack likelihood, higher means more attack-like
  PadLabel pad_label = PadLabel::kBonaFide;
  std::map<std::string, std::string> groups;  // partition name -> group id
};

/// Scores of one evaluation run. Immutable after construction.
class ScoreSet {
 public:
  ScoreSet() = default;
  explicit ScoreSet(std::vector<ScoreRecord> records);
  /// Every record must carry a group of `partition`.
  ScoreSet(std::vector<ScoreRecord> records, GroupPartition partition);

  const std::vector<ScoreRecord>& records() const { return records_; }
  const std::optional<GroupPartition>& partition() const { return partition_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::size_t count(PadLabel label) const;
  std::vector<double> scores(PadLabel label) const;

  /// Group of record `i` under the attached partition.
  const std::string& group_of(std::size_t i) const;

  /// Records of one group of the attached partition (partition dropped).
  ScoreSet group_subset(std::string_view group) const;

  /// Attaches `partition`, keeping only records annotated for it.
  ScoreSet restricted_to(const GroupPartition& partition) const;

 private:
  std::vector<ScoreRecord> records_;
  std::optional<GroupPartition> partition_;
};

/// Parses "sample_id,score[,pad_label]" CSV. With a manifest, labels and
/// standard-partition groups are joined from it and every id must resolve.
ScoreSet parse_scores(std::istream& input, const SampleManifest* manifest = nullptr);
ScoreSet parse_scores_string(std::string_view text, const SampleManifest* manifest = nullptr);
ScoreSet load_scores(const std::string& path, const SampleManifest* manifest = nullptr);

/// Writes the score CSV format, including the pad_label column.
std::string serialize_scores(const ScoreSet& scores);

}  // namespace padfair
