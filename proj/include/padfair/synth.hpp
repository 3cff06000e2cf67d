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
#include <string>
#include <vector>

#include "padfair/data_model.hpp"
#include "padfair/rates.hpp"

namespace padfair {

struct GroupScoreParams {
  std::string group;
  double bonafide_mean = 0.0;
  double bonafide_std = 1.0;
  double attack_mean = 3.0;
  double attack_std = 1.0;
  std::size_t n_bonafide = 1000;
  std::size_t n_attack = 1000;
};

struct GroupScoreSpec {
  std::string partition = "gender";
  std::vector<GroupScoreParams> groups;

  void validate() const;
};

/// Gaussian scores per group and class, deterministic in `seed`. Sample ids
/// are "<group>_bf_<i>" and "<group>_pa_<i>". When `spec` has two or more
/// groups the partition is attached.
ScoreSet synth_scores(const GroupScoreSpec& spec, std::uint64_t seed);

// Reference oracles. Each is a literal scan over the records, kept apart
// from the sorted-array arithmetic in rates.cpp.

RatePair brute_force_rates(const ScoreSet& scores, double tau);

/// Scans every attack score as a candidate and keeps the largest one whose
/// APCER does not exceed x.
double brute_force_threshold_at_apcer(const ScoreSet& scores, double x);

/// Rebuilds the candidate set from a std::set and scans it with
/// brute_force_rates.
EerResult brute_force_eer(const ScoreSet& scores);

struct SynthManifestConfig {
  std::size_t subjects = 947;
  std::size_t min_samples_per_subject = 2;
  std::size_t max_samples_per_subject = 8;
  double attack_share = 0.65;   // roughly 1 : 1.9 bona fide : attack
  double male_share = 0.68;     // roughly 1 : 2.1 female : male
  double train_fraction = 0.8;
};

/// Attribute-annotated manifest with identity-disjoint splits.
SampleManifest synth_manifest(const SynthManifestConfig& config, std::uint64_t seed);

}  // namespace padfair
