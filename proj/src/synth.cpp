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

#include "padfair/synth.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "padfair/error.hpp"
#include "padfair/protocol.hpp"
#include "padfair/random.hpp"

namespace padfair {

void GroupScoreSpec::validate() const {
  if (groups.empty()) throw Error(ErrorCode::kInvalidArgument, "GroupScoreSpec has no groups");
  for (const auto& g : groups) {
    if (!(g.bonafide_std > 0.0) || !(g.attack_std > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "group '" + g.group + "': standard deviations must be positive");
    }
    if (g.n_bonafide == 0 || g.n_attack == 0) {
      throw Error(ErrorCode::kInvalidArgument, "group '" + g.group + "': each class needs at least one sample");
    }
  }
}

ScoreSet synth_scores(const GroupScoreSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<ScoreRecord> records;
  std::vector<std::string> names;
  for (const auto& g : spec.groups) {
    names.push_back(g.group);
    for (std::size_t i = 0; i < g.n_bonafide; ++i) {
      records.push_back({g.group + "_bf_" + std::to_string(i), rng.normal(g.bonafide_mean, g.bonafide_std),
                         PadLabel::kBonaFide, {{spec.partition, g.group}}});
    }
    for (std::size_t i = 0; i < g.n_attack; ++i) {
      records.push_back({g.group + "_pa_" + std::to_string(i), rng.normal(g.attack_mean, g.attack_std),
                         PadLabel::kAttack, {{spec.partition, g.group}}});
    }
  }
  if (names.size() >= 2) return ScoreSet(std::move(records), GroupPartition(spec.partition, names));
  return ScoreSet(std::move(records));
}

RatePair brute_force_rates(const ScoreSet& scores, double tau) {
  std::size_t attacks = 0, accepted_attacks = 0, bonafides = 0, rejected_bonafides = 0;
  for (const auto& r : scores.records()) {
    const bool classified_attack = r.score >= tau;
    if (r.pad_label == PadLabel::kAttack) {
      ++attacks;
      if (!classified_attack) ++accepted_attacks;
    } else {
      ++bonafides;
      if (classified_attack) ++rejected_bonafides;
    }
  }
  if (attacks == 0 || bonafides == 0) {
    throw Error(ErrorCode::kUndefinedRate, "brute-force rates need both classes");
  }
  return {static_cast<double>(accepted_attacks) / static_cast<double>(attacks),
          static_cast<double>(rejected_bonafides) / static_cast<double>(bonafides)};
}

double brute_force_threshold_at_apcer(const ScoreSet& scores, double x) {
  std::size_t attacks = 0;
  for (const auto& r : scores.records()) attacks += r.pad_label == PadLabel::kAttack;
  if (attacks == 0) throw Error(ErrorCode::kUndefinedRate, "no attack samples");

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& candidate : scores.records()) {
    if (candidate.pad_label != PadLabel::kAttack) continue;
    std::size_t below = 0;
    for (const auto& r : scores.records()) {
      if (r.pad_label == PadLabel::kAttack && r.score < candidate.score) ++below;
    }
    const double rate = static_cast<double>(below) / static_cast<double>(attacks);
    if (rate <= x && candidate.score > best) best = candidate.score;
  }
  return best;
}

EerResult brute_force_eer(const ScoreSet& scores) {
  const auto attack = scores.scores(PadLabel::kAttack);
  const auto bonafide = scores.scores(PadLabel::kBonaFide);
  if (attack.empty() || bonafide.empty()) throw Error(ErrorCode::kUndefinedRate, "EER needs both classes");

  EerResult best;
  double best_gap = std::numeric_limits<double>::infinity();
  // Candidates rebuilt here rather than taken from eer_candidates().
  std::set<double> distinct(attack.begin(), attack.end());
  distinct.insert(bonafide.begin(), bonafide.end());
  std::vector<double> candidates;
  double previous = 0.0;
  bool first = true;
  for (double v : distinct) {
    if (!first) {
      const double mid = previous + (v - previous) / 2.0;
      if (mid > previous && mid < v) candidates.push_back(mid);
    }
    candidates.push_back(v);
    previous = v;
    first = false;
  }
  candidates.push_back(std::nextafter(previous, std::numeric_limits<double>::infinity()));

  for (double t : candidates) {
    const RatePair r = brute_force_rates(scores, t);
    const double gap = std::abs(r.apcer - r.bpcer);
    if (gap < best_gap || (gap == best_gap && t < best.tau.tau)) {
      best_gap = gap;
      best.tau = DecisionThreshold(t);
      best.rates = r;
      best.eer = (r.apcer + r.bpcer) / 2.0;
    }
  }
  return best;
}

SampleManifest synth_manifest(const SynthManifestConfig& config, std::uint64_t seed) {
  if (config.subjects < 2 || config.min_samples_per_subject == 0 ||
      config.max_samples_per_subject < config.min_samples_per_subject) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic manifest configuration");
  }
  Rng rng(seed);
  std::vector<SampleRecord> records;
  static const char* kAttackTypes[] = {"print", "replay", "mask", "wax"};
  for (std::size_t s = 0; s < config.subjects; ++s) {
    const std::string subject = "subj" + std::to_string(s);
    AttributeSet subject_attrs;
    subject_attrs.gender = rng.bernoulli(config.male_share) ? Gender::kMale : Gender::kFemale;
    const bool male = subject_attrs.gender == Gender::kMale;
    subject_attrs.beard = male && rng.bernoulli(0.3);
    subject_attrs.makeup = !male && rng.bernoulli(0.5);
    subject_attrs.long_hair = rng.bernoulli(male ? 0.15 : 0.7);
    subject_attrs.straight_hair = rng.bernoulli(0.5);

    const auto span = config.max_samples_per_subject - config.min_samples_per_subject + 1;
    const auto n = config.min_samples_per_subject + rng.index(span);
    for (std::size_t k = 0; k < n; ++k) {
      SampleRecord r;
      r.sample_id = subject + "_s" + std::to_string(k);
      r.subject_id = subject;
      r.media_path = "images/" + r.sample_id + ".png";
      // The first sample of each subject is bona fide so every subject has one.
      r.pad_label = (k > 0 && rng.bernoulli(config.attack_share)) ? PadLabel::kAttack : PadLabel::kBonaFide;
      if (r.pad_label == PadLabel::kAttack) r.attack_type = kAttackTypes[rng.index(4)];
      r.attributes = subject_attrs;
      // Capture-level attributes vary per sample.
      r.attributes.eyeglasses = rng.bernoulli(0.25);
      r.attributes.bangs = rng.bernoulli(0.3);
      records.push_back(std::move(r));
    }
  }
  auto [train, test] = identity_disjoint_split(records, {config.train_fraction, mix64(seed)});
  SampleManifest manifest;
  manifest.records = std::move(train);
  manifest.records.insert(manifest.records.end(), test.begin(), test.end());
  manifest.split_overlap = split_subject_overlap(manifest.records);
  return manifest;
}

}  // namespace padfair
