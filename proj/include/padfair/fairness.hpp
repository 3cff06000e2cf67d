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
#include <utility>
#include <vector>

#include "padfair/data_model.hpp"
#include "padfair/rates.hpp"

namespace padfair {

enum class FairnessMetric { kFdr, kAbf };

std::string_view to_string(FairnessMetric metric);

/// Ordered APCER targets at which thresholds are placed.
class SweepGrid {
 public:
  /// 0.005 to 0.2 in steps of 0.005 (40 points).
  SweepGrid();
  explicit SweepGrid(std::vector<double> targets);
  static SweepGrid linspace(double start, double end, double step);

  const std::vector<double>& targets() const { return targets_; }
  std::size_t size() const { return targets_.size(); }

 private:
  std::vector<double> targets_;
};

struct MetricConfig {
  double alpha = 0.5;
  SweepGrid sweep;

  void validate() const;
};

struct GroupRates {
  std::string group;
  RatePair rates;
};

/// One FDR or ABF evaluation. value = 1 - (alpha * a_term + (1 - alpha) * b_term).
struct FairnessValue {
  double value = 1.0;
  double a_term = 0.0;
  double b_term = 0.0;
  DecisionThreshold tau;
  std::vector<GroupRates> per_group_rates;  // partition order

  /// ABF below zero: discrepancy larger than the worst-case headroom.
  bool large_discrepancy() const { return value < 0.0; }
};

/// Largest pairwise gaps of APCER and BPCER across groups.
RatePair max_pairwise_gap(std::span<const RatePair> rates);

/// FDR from per-group rates at one threshold.
FairnessValue fdr_from_rates(std::span<const RatePair> rates, double alpha);

/// ABF from per-group rates. Throws kSingularDenominator when some group's
/// APCER or BPCER equals 1.
FairnessValue abf_from_rates(std::span<const RatePair> rates, double alpha);

FairnessValue fdr(const ScoreSet& scores, const GroupPartition& partition, const DecisionThreshold& tau,
                  double alpha);
FairnessValue abf(const ScoreSet& scores, const GroupPartition& partition, const DecisionThreshold& tau,
                  double alpha);

struct CurvePoint {
  double x = 0.0;
  std::optional<FairnessValue> value;  // empty when undefined at this x
  std::string undefined_reason;
};

struct FairnessCurve {
  FairnessMetric metric = FairnessMetric::kFdr;
  double alpha = 0.5;
  std::vector<CurvePoint> points;
  double auc = 0.0;
  std::size_t excluded_points = 0;
};

/// Normalised trapezoidal area: integral over x divided by (x_max - x_min).
/// A single point yields its own value.
double normalized_auc(std::span<const double> xs, std::span<const double> values);

/// Evaluates `metric` at tau = threshold_at_apcer(threshold_source, x) for
/// every x of the grid.
FairnessCurve fairness_curve(const ScoreSet& scores, const GroupPartition& partition, FairnessMetric metric,
                             const MetricConfig& config, const ScoreSet& threshold_source);

/// Same, with the pooled scores of all groups as the threshold source.
FairnessCurve fairness_curve(const ScoreSet& scores, const GroupPartition& partition, FairnessMetric metric,
                             const MetricConfig& config);

struct AlphaProfile {
  std::vector<std::pair<double, double>> entries;  // (alpha, ABF-AUC)
  double mean_auc = 0.0;
};

/// 0.0 to 1.0 in steps of 0.1.
std::vector<double> default_alphas();

AlphaProfile abf_alpha_profile(const ScoreSet& scores, const GroupPartition& partition, const MetricConfig& config,
                               std::span<const double> alphas);
AlphaProfile abf_alpha_profile(const ScoreSet& scores, const GroupPartition& partition, const MetricConfig& config,
                               std::span<const double> alphas, const ScoreSet& threshold_source);

}  // namespace padfair
