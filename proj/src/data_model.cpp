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

#include "padfair/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "padfair/error.hpp"

namespace padfair {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, at_line(line) + what);
}

std::string required_string(const ordered_json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) parse_error(line, std::string("missing or non-string key '") + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const ordered_json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) parse_error(line, std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

AttributeSet parse_attributes(const ordered_json& obj, std::size_t line) {
  AttributeSet attrs;
  if (!obj.is_object()) parse_error(line, "'attributes' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "gender") {
      if (value.is_null()) continue;
      if (!value.is_string()) parse_error(line, "gender must be \"male\" or \"female\"");
      const auto g = value.get<std::string>();
      if (g == "male") attrs.gender = Gender::kMale;
      else if (g == "female") attrs.gender = Gender::kFemale;
      else parse_error(line, "gender must be \"male\" or \"female\", got \"" + g + "\"");
      continue;
    }
    auto attribute = parse_attribute(key);
    if (!attribute) {
      throw Error(ErrorCode::kUnknownAttribute, at_line(line) + "unknown attribute key '" + key + "'");
    }
    if (value.is_null()) continue;
    if (!value.is_boolean()) parse_error(line, "attribute '" + key + "' must be true or false");
    attrs.set(*attribute, value.get<bool>());
  }
  return attrs;
}

SampleRecord parse_record(std::string_view text, std::size_t line) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(line, std::string("invalid JSON (") + e.what() + ")");
  }
  if (!obj.is_object()) parse_error(line, "expected a JSON object");

  static const std::set<std::string> kKeys = {"sample_id", "subject_id", "media_path", "pad_label",
                                              "attack_type", "split", "attributes"};
  for (const auto& item : obj.items()) {
    if (!kKeys.contains(item.key())) parse_error(line, "unexpected key '" + item.key() + "'");
  }

  SampleRecord rec;
  rec.sample_id = required_string(obj, "sample_id", line);
  if (rec.sample_id.empty()) parse_error(line, "empty sample_id");
  rec.subject_id = required_string(obj, "subject_id", line);
  rec.media_path = optional_string(obj, "media_path", line);

  const auto label = required_string(obj, "pad_label", line);
  auto parsed_label = parse_pad_label(label);
  if (!parsed_label) parse_error(line, "pad_label must be \"bonafide\" or \"attack\", got \"" + label + "\"");
  rec.pad_label = *parsed_label;

  rec.attack_type = optional_string(obj, "attack_type", line);
  if (rec.attack_type && rec.pad_label == PadLabel::kBonaFide) {
    parse_error(line, "bona fide record '" + rec.sample_id + "' carries an attack_type");
  }

  const auto split = required_string(obj, "split", line);
  if (split == "train") rec.split = Split::kTrain;
  else if (split == "test") rec.split = Split::kTest;
  else parse_error(line, "split must be \"train\" or \"test\", got \"" + split + "\"");

  if (auto it = obj.find("attributes"); it != obj.end() && !it->is_null()) {
    rec.attributes = parse_attributes(*it, line);
  }
  return rec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string_view to_string(PadLabel label) {
  return label == PadLabel::kAttack ? "attack" : "bonafide";
}

std::string_view to_string(Gender gender) {
  return gender == Gender::kMale ? "male" : "female";
}

std::string_view to_string(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

std::optional<PadLabel> parse_pad_label(std::string_view text) {
  if (text == "bonafide") return PadLabel::kBonaFide;
  if (text == "attack") return PadLabel::kAttack;
  return std::nullopt;
}

std::string_view to_string(Attribute attribute) {
  switch (attribute) {
    case Attribute::kBangs: return "bangs";
    case Attribute::kBeard: return "beard";
    case Attribute::kEyeglasses: return "eyeglasses";
    case Attribute::kMakeup: return "makeup";
    case Attribute::kLongHair: return "long_hair";
    case Attribute::kStraightHair: return "straight_hair";
  }
  return "";
}

std::optional<Attribute> parse_attribute(std::string_view text) {
  for (auto a : kAllAttributes) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<bool> AttributeSet::get(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kBangs: return bangs;
    case Attribute::kBeard: return beard;
    case Attribute::kEyeglasses: return eyeglasses;
    case Attribute::kMakeup: return makeup;
    case Attribute::kLongHair: return long_hair;
    case Attribute::kStraightHair: return straight_hair;
  }
  return std::nullopt;
}

void AttributeSet::set(Attribute attribute, std::optional<bool> value) {
  switch (attribute) {
    case Attribute::kBangs: bangs = value; break;
    case Attribute::kBeard: beard = value; break;
    case Attribute::kEyeglasses: eyeglasses = value; break;
    case Attribute::kMakeup: makeup = value; break;
    case Attribute::kLongHair: long_hair = value; break;
    case Attribute::kStraightHair: straight_hair = value; break;
  }
}

const SampleRecord* SampleManifest::find(std::string_view sample_id) const {
  for (const auto& r : records) {
    if (r.sample_id == sample_id) return &r;
  }
  return nullptr;
}

std::vector<std::string> split_subject_overlap(std::span<const SampleRecord> records) {
  std::set<std::string> train, test;
  for (const auto& r : records) (r.split == Split::kTrain ? train : test).insert(r.subject_id);
  std::vector<std::string> overlap;
  std::set_intersection(train.begin(), train.end(), test.begin(), test.end(), std::back_inserter(overlap));
  return overlap;
}

SampleManifest parse_manifest(std::istream& input) {
  SampleManifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    auto rec = parse_record(text, line_no);
    if (!seen.insert(rec.sample_id).second) {
      throw Error(ErrorCode::kDuplicateId, at_line(line_no) + "duplicate sample_id '" + rec.sample_id + "'");
    }
    manifest.records.push_back(std::move(rec));
  }
  manifest.split_overlap = split_subject_overlap(manifest.records);
  return manifest;
}

SampleManifest parse_manifest_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_manifest(in);
}

SampleManifest load_manifest(const std::string& path) {
  return parse_manifest_string(read_file(path));
}

std::string serialize_manifest(const SampleManifest& manifest) {
  std::string out;
  for (const auto& r : manifest.records) {
    ordered_json obj;
    obj["sample_id"] = r.sample_id;
    obj["subject_id"] = r.subject_id;
    if (r.media_path) obj["media_path"] = *r.media_path;
    obj["pad_label"] = to_string(r.pad_label);
    if (r.attack_type) obj["attack_type"] = *r.attack_type;
    obj["split"] = to_string(r.split);
    ordered_json attrs = ordered_json::object();
    if (r.attributes.gender) attrs["gender"] = to_string(*r.attributes.gender);
    for (auto a : kAllAttributes) {
      if (auto v = r.attributes.get(a)) attrs[std::string(to_string(a))] = *v;
    }
    obj["attributes"] = std::move(attrs);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

bool derive_occlusion(const AttributeSet& attributes) {
  if (!attributes.beard || !attributes.eyeglasses || !attributes.bangs) {
    std::string missing;
    if (!attributes.beard) missing += " beard";
    if (!attributes.eyeglasses) missing += " eyeglasses";
    if (!attributes.bangs) missing += " bangs";
    throw Error(ErrorCode::kMissingAttribute, "occlusion needs beard, eyeglasses and bangs; missing:" + missing);
  }
  return *attributes.beard || *attributes.eyeglasses || *attributes.bangs;
}

std::vector<std::int64_t> frame_indices(std::int64_t frame_count, std::int64_t n) {
  if (frame_count < 1 || n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame_indices needs positive frame_count and n");
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::min(frame_count, n)));
  for (std::int64_t i = 0; i < n; ++i) {
    // i * frame_count fits easily for realistic video lengths; use 128-bit
    // intermediate to stay exact for any int64 input.
    const auto idx = static_cast<std::int64_t>(static_cast<__int128>(i) * frame_count / n);
    if (out.empty() || idx != out.back()) out.push_back(idx);
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupPartition::GroupPartition(std::string name, std::vector<std::string> groups)
    : name_(std::move(name)), groups_(std::move(groups)) {
  if (groups_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "partition '" + name_ + "' needs at least two groups");
  }
  std::unordered_set<std::string> unique(groups_.begin(), groups_.end());
  if (unique.size() != groups_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "partition '" + name_ + "' has duplicate group ids");
  }
}

bool GroupPartition::contains(std::string_view group) const {
  return std::find(groups_.begin(), groups_.end(), group) != groups_.end();
}

GroupPartition standard_partition(std::string_view name) {
  if (name == "gender") return GroupPartition("gender", {"male", "female"});
  if (name == "occlusion") return GroupPartition("occlusion", {"occlusion", "non_occlusion"});
  if (auto a = parse_attribute(name)) {
    const std::string n(to_string(*a));
    return GroupPartition(n, {n, "no_" + n});
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown partition '" + std::string(name) + "'");
}

std::vector<std::string> standard_partition_names() {
  std::vector<std::string> names = {"gender", "occlusion"};
  for (auto a : kAllAttributes) names.emplace_back(to_string(a));
  return names;
}

std::optional<std::string> standard_group(std::string_view partition, const AttributeSet& attributes) {
  if (partition == "gender") {
    if (!attributes.gender) return std::nullopt;
    return std::string(to_string(*attributes.gender));
  }
  if (partition == "occlusion") {
    if (!attributes.beard || !attributes.eyeglasses || !attributes.bangs) return std::nullopt;
    return derive_occlusion(attributes) ? "occlusion" : "non_occlusion";
  }
  if (auto a = parse_attribute(partition)) {
    auto v = attributes.get(*a);
    if (!v) return std::nullopt;
    const std::string n(to_string(*a));
    return *v ? n : "no_" + n;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown partition '" + std::string(partition) + "'");
}

ScoreSet::ScoreSet(std::vector<ScoreRecord> records) : records_(std::move(records)) {
  for (const auto& r : records_) {
    if (!std::isfinite(r.score)) {
      throw Error(ErrorCode::kNonFiniteScore, "non-finite score for sample '" + r.sample_id + "'");
    }
  }
}

ScoreSet::ScoreSet(std::vector<ScoreRecord> records, GroupPartition partition)
    : ScoreSet(std::move(records)) {
  for (const auto& r : records_) {
    auto it = r.groups.find(partition.name());
    if (it == r.groups.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample '" + r.sample_id + "' has no group for partition '" + partition.name() + "'");
    }
    if (!partition.contains(it->second)) {
      throw Error(ErrorCode::kInvalidArgument, "sample '" + r.sample_id + "' references undeclared group '" +
                                                   it->second + "' of partition '" + partition.name() + "'");
    }
  }
  partition_ = std::move(partition);
}

std::size_t ScoreSet::count(PadLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [label](const auto& r) { return r.pad_label == label; }));
}

std::vector<double> ScoreSet::scores(PadLabel label) const {
  std::vector<double> out;
  for (const auto& r : records_) {
    if (r.pad_label == label) out.push_back(r.score);
  }
  return out;
}

const std::string& ScoreSet::group_of(std::size_t i) const {
  if (!partition_) throw Error(ErrorCode::kInvalidArgument, "score set has no partition attached");
  return records_.at(i).groups.at(partition_->name());
}

ScoreSet ScoreSet::group_subset(std::string_view group) const {
  if (!partition_) throw Error(ErrorCode::kInvalidArgument, "score set has no partition attached");
  std::vector<ScoreRecord> out;
  for (const auto& r : records_) {
    if (r.groups.at(partition_->name()) == group) out.push_back(r);
  }
  return ScoreSet(std::move(out));
}

ScoreSet ScoreSet::restricted_to(const GroupPartition& partition) const {
  std::vector<ScoreRecord> out;
  for (const auto& r : records_) {
    if (r.groups.contains(partition.name())) out.push_back(r);
  }
  return ScoreSet(std::move(out), partition);
}

ScoreSet parse_scores(std::istream& input, const SampleManifest* manifest) {
  std::unordered_map<std::string_view, const SampleRecord*> index;
  if (manifest) {
    for (const auto& r : manifest->records) index.emplace(r.sample_id, &r);
  }

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_label_column = false;
  std::vector<ScoreRecord> records;
  std::vector<std::string> orphans;

  while (std::getline(input, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    auto fields = split_csv(text);
    if (!have_header) {
      if (fields.size() < 2 || fields.size() > 3 || fields[0] != "sample_id" || fields[1] != "score" ||
          (fields.size() == 3 && fields[2] != "pad_label")) {
        parse_error(line_no, "expected header \"sample_id,score\" or \"sample_id,score,pad_label\"");
      }
      have_header = true;
      have_label_column = fields.size() == 3;
      continue;
    }
    if (fields.size() != (have_label_column ? 3u : 2u)) parse_error(line_no, "wrong number of columns");

    ScoreRecord rec;
    rec.sample_id = fields[0];
    if (rec.sample_id.empty()) parse_error(line_no, "empty sample_id");

    const auto& s = fields[1];
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, rec.score);
    if (ec != std::errc() || ptr != end) {
      // from_chars does not accept a leading '+'
      if (!s.empty() && s[0] == '+') {
        const auto retry = std::from_chars(s.data() + 1, end, rec.score);
        ptr = retry.ptr;
        ec = retry.ec;
      }
      if (ec != std::errc() || ptr != end) parse_error(line_no, "invalid score \"" + s + "\"");
    }
    if (!std::isfinite(rec.score)) {
      throw Error(ErrorCode::kNonFiniteScore, at_line(line_no) + "non-finite score \"" + s + "\"");
    }

    std::optional<PadLabel> column_label;
    if (have_label_column) {
      column_label = parse_pad_label(fields[2]);
      if (!column_label) parse_error(line_no, "invalid pad_label \"" + fields[2] + "\"");
    }

    if (manifest) {
      auto it = index.find(rec.sample_id);
      if (it == index.end()) {
        orphans.push_back(rec.sample_id);
        continue;
      }
      const SampleRecord& sample = *it->second;
      if (column_label && *column_label != sample.pad_label) {
        parse_error(line_no, "pad_label of '" + rec.sample_id + "' disagrees with the manifest");
      }
      rec.pad_label = sample.pad_label;
      for (const auto& name : standard_partition_names()) {
        if (auto g = standard_group(name, sample.attributes)) rec.groups.emplace(name, std::move(*g));
      }
    } else {
      if (!column_label) parse_error(line_no, "no manifest given, so a pad_label column is required");
      rec.pad_label = *column_label;
    }
    records.push_back(std::move(rec));
  }

  if (!orphans.empty()) {
    std::string list;
    for (std::size_t i = 0; i < orphans.size() && i < 10; ++i) list += (i ? ", " : "") + orphans[i];
    if (orphans.size() > 10) list += ", ...";
    throw Error(ErrorCode::kUnresolvedId, std::to_string(orphans.size()) +
                                              " sample id(s) not found in manifest: " + list);
  }
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "score input contains no records");
  return ScoreSet(std::move(records));
}

ScoreSet parse_scores_string(std::string_view text, const SampleManifest* manifest) {
  std::istringstream in{std::string(text)};
  return parse_scores(in, manifest);
}

ScoreSet load_scores(const std::string& path, const SampleManifest* manifest) {
  return parse_scores_string(read_file(path), manifest);
}

std::string serialize_scores(const ScoreSet& scores) {
  std::string out = "sample_id,score,pad_label\n";
  char buf[64];
  for (const auto& r : scores.records()) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.score);
    out += r.sample_id;
    out += ',';
    out.append(buf, ptr);
    out += ',';
    out += to_string(r.pad_label);
    out += '\n';
  }
  return out;
}

}  // namespace padfair
