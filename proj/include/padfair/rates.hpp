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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padfair/data_model.hpp"

namespace padfair {

/// A decision threshold: samples with score >= tau are classified Attack.
struct DecisionThreshold {
  double tau = 0.0;
  std::string source = "fused";
  std::optional<double> target_apcer;

  DecisionThreshold() = default;
  explicit DecisionThreshold(double t, std::string src = "fused", std::optional<double> target = std::nullopt);
};

struct RatePair {
  double apcer = 0.0;
  double bpcer = 0.0;

  bool operator==(const RatePair&) const = default;
};

struct EerResult {
  double eer = 0.0;
  DecisionThreshold tau;
  RatePair rates;
};

/// Attack and bona fide scores sorted ascending, so each rate is a binary
/// search. Build once and query many thresholds.
class SortedScores {
 public:
  SortedScores() = default;
  explicit SortedScores(const ScoreSet& scores);
  SortedScores(std::vector<double> attack, std::vector<double> bonafide);

  const std::vector<double>& attack() const { return attack_; }
  const std::vector<double>& bonafide() const { return bonafide_; }

  double apcer(double tau) const;
  double bpcer(double tau) const;
  RatePair rates(double tau) const { return {apcer(tau), bpcer(tau)}; }

  /// Largest attainable threshold whose APCER does not exceed x.
  double threshold_at_apcer(double x) const;

 private:
  std::vector<double> attack_;
  std::vector<double> bonafide_;
};

/// Fraction of attacks scored below tau.
double apcer(const ScoreSet& scores, const DecisionThreshold& tau);

/// Fraction of bona fides scored at or above tau.
double bpcer(const ScoreSet& scores, const DecisionThreshold& tau);

/// Threshold at the (floor(x * N_attack) + 1)-th smallest attack score.
/// APCER at the result is <= x and any larger attainable threshold exceeds x.
DecisionThreshold threshold_at_apcer(const ScoreSet& scores, double x, std::string source = "fused");

/// Equal error rate over all candidate thresholds (distinct scores,
/// midpoints between neighbours, and one threshold above every score).
/// Minimises |APCER - BPCER|, reports their mean; ties go to smaller tau.
EerResult eer(const ScoreSet& scores, std::string source = "fused");
EerResult eer(const SortedScores& scores, std::string source = "fused");

/// Candidate thresholds scanned by eer(), ascending.
std::vector<double> eer_candidates(std::span<const double> attack, std::span<const double> bonafide);

}  // namespace padfair
