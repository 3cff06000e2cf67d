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

#include "padfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "padfair/error.hpp"

namespace padfair {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
}

/// Per-group sorted scores for one partition, built once per curve.
class GroupedScores {
 public:
  GroupedScores(const ScoreSet& scores, const GroupPartition& partition) : partition_(partition) {
    std::vector<std::vector<double>> attack(partition.size()), bonafide(partition.size());
    const auto& name = partition.name();
    for (const auto& r : scores.records()) {
      auto it = r.groups.find(name);
      if (it == r.groups.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "sample '" + r.sample_id + "' has no group for partition '" + name + "'");
      }
      const auto& groups = partition.groups();
      const auto pos = std::find(groups.begin(), groups.end(), it->second);
      if (pos == groups.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "sample '" + r.sample_id + "' references undeclared group '" + it->second + "'");
      }
      const auto g = static_cast<std::size_t>(pos - groups.begin());
      (r.pad_label == PadLabel::kAttack ? attack : bonafide)[g].push_back(r.score);
    }
    for (std::size_t g = 0; g < partition.size(); ++g) {
      if (attack[g].empty() || bonafide[g].empty()) {
        throw Error(ErrorCode::kUndefinedRate,
                    "group '" + partition.groups()[g] + "' of partition '" + name + "' has no " +
                        (attack[g].empty() ? "attack" : "bona fide") + " samples");
      }
      groups_.emplace_back(std::move(attack[g]), std::move(bonafide[g]));
    }
  }

  std::vector<RatePair> rates(double tau) const {
    std::vector<RatePair> out;
    out.reserve(groups_.size());
    for (const auto& g : groups_) out.push_back(g.rates(tau));
    return out;
  }

  const GroupPartition& partition() const { return partition_; }

 private:
  const GroupPartition& partition_;
  std::vector<SortedScores> groups_;
};

FairnessValue evaluate(FairnessMetric metric, std::span<const RatePair> rates, double alpha) {
  return metric == FairnessMetric::kFdr ? fdr_from_rates(rates, alpha) : abf_from_rates(rates, alpha);
}

FairnessValue evaluate(FairnessMetric metric, const GroupedScores& grouped, const DecisionThreshold& tau,
                       double alpha) {
  const auto rates = grouped.rates(tau.tau);
  FairnessValue v = evaluate(metric, rates, alpha);
  v.tau = tau;
  const auto& names = grouped.partition().groups();
  for (std::size_t g = 0; g < rates.size(); ++g) v.per_group_rates.push_back({names[g], rates[g]});
  return v;
}

std::string format_x(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

}  // namespace

std::string_view to_string(FairnessMetric metric) {
  return metric == FairnessMetric::kFdr ? "fdr" : "abf";
}

SweepGrid::SweepGrid() {
  targets_.reserve(40);
  for (int k = 1; k <= 40; ++k) targets_.push_back(0.005 * k);
}

SweepGrid::SweepGrid(std::vector<double> targets) : targets_(std::move(targets)) {
  if (targets_.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep grid is empty");
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!(targets_[i] > 0.0 && targets_[i] < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sweep targets must lie in (0, 1)");
    }
    if (i > 0 && !(targets_[i] > targets_[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "sweep targets must be strictly increasing");
    }
  }
}

SweepGrid SweepGrid::linspace(double start, double end, double step) {
  if (!(step > 0.0) || !(end >= start)) throw Error(ErrorCode::kInvalidArgument, "invalid sweep grid bounds");
  // Count from the rounded number of steps so 0.005..0.2 gives exactly 40
  // points and each point is start + k*step rather than an accumulated sum.
  const auto steps = static_cast<long>(std::floor((end - start) / step + 1e-9));
  std::vector<double> targets;
  for (long k = 0; k <= steps; ++k) targets.push_back(start + static_cast<double>(k) * step);
  return SweepGrid(std::move(targets));
}

void MetricConfig::validate() const { check_alpha(alpha); }

RatePair max_pairwise_gap(std::span<const RatePair> rates) {
  if (rates.size() < 2) throw Error(ErrorCode::kInvalidArgument, "fairness needs at least two groups");
  // max over pairs of |r_i - r_j| is max - min.
  auto [amin, amax] = std::minmax_element(rates.begin(), rates.end(),
                                          [](const RatePair& a, const RatePair& b) { return a.apcer < b.apcer; });
  auto [bmin, bmax] = std::minmax_element(rates.begin(), rates.end(),
                                          [](const RatePair& a, const RatePair& b) { return a.bpcer < b.bpcer; });
  return {amax->apcer - amin->apcer, bmax->bpcer - bmin->bpcer};
}

FairnessValue fdr_from_rates(std::span<const RatePair> rates, double alpha) {
  check_alpha(alpha);
  const RatePair gap = max_pairwise_gap(rates);
  FairnessValue v;
  v.a_term = gap.apcer;
  v.b_term = gap.bpcer;
  v.value = 1.0 - (alpha * v.a_term + (1.0 - alpha) * v.b_term);
  return v;
}

FairnessValue abf_from_rates(std::span<const RatePair> rates, double alpha) {
  check_alpha(alpha);
  const RatePair gap = max_pairwise_gap(rates);
  double worst_apcer = 0.0, worst_bpcer = 0.0;
  for (const auto& r : rates) {
    worst_apcer = std::max(worst_apcer, r.apcer);
    worst_bpcer = std::max(worst_bpcer, r.bpcer);
  }
  if (worst_apcer >= 1.0) {
    throw Error(ErrorCode::kSingularDenominator, "ABF undefined: worst-group APCER is 1 (apcer denominator is zero)");
  }
  if (worst_bpcer >= 1.0) {
    throw Error(ErrorCode::kSingularDenominator, "ABF undefined: worst-group BPCER is 1 (bpcer denominator is zero)");
  }
  FairnessValue v;
  v.a_term = gap.apcer / (1.0 - worst_apcer);
  v.b_term = gap.bpcer / (1.0 - worst_bpcer);
  v.value = 1.0 - (alpha * v.a_term + (1.0 - alpha) * v.b_term);
  return v;
}

FairnessValue fdr(const ScoreSet& scores, const GroupPartition& partition, const DecisionThreshold& tau,
                  double alpha) {
  return evaluate(FairnessMetric::kFdr, GroupedScores(scores, partition), tau, alpha);
}

FairnessValue abf(const ScoreSet& scores, const GroupPartition& partition, const DecisionThreshold& tau,
                  double alpha) {
  return evaluate(FairnessMetric::kAbf, GroupedScores(scores, partition), tau, alpha);
}

double normalized_auc(std::span<const double> xs, std::span<const double> values) {
  if (xs.size() != values.size() || xs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "AUC needs matching, non-empty x and value lists");
  }
  if (xs.size() == 1) return values[0];
  double area = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) area += (xs[i] - xs[i - 1]) * (values[i] + values[i - 1]) / 2.0;
  return area / (xs.back() - xs.front());
}

FairnessCurve fairness_curve(const ScoreSet& scores, const GroupPartition& partition, FairnessMetric metric,
                             const MetricConfig& config, const ScoreSet& threshold_source) {
  config.validate();
  const GroupedScores grouped(scores, partition);
  auto source_attacks = threshold_source.scores(PadLabel::kAttack);
  if (source_attacks.empty()) {
    throw Error(ErrorCode::kUndefinedRate, "threshold source has no attack samples");
  }
  const SortedScores source(std::move(source_attacks), {});

  FairnessCurve curve;
  curve.metric = metric;
  curve.alpha = config.alpha;
  std::vector<double> xs, values;
  for (double x : config.sweep.targets()) {
    CurvePoint point;
    point.x = x;
    const DecisionThreshold tau(source.threshold_at_apcer(x), "fused", x);
    try {
      point.value = evaluate(metric, grouped, tau, config.alpha);
      xs.push_back(x);
      values.push_back(point.value->value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularDenominator) {
        throw Error(e.code(), std::string(e.what()) + " (at x = " + format_x(x) + ")");
      }
      point.undefined_reason = e.what();
      ++curve.excluded_points;
    }
    curve.points.push_back(std::move(point));
  }
  if (xs.empty()) {
    throw Error(ErrorCode::kSingularDenominator,
                std::string(to_string(metric)) + " curve is undefined at every grid point");
  }
  curve.auc = normalized_auc(xs, values);
  return curve;
}

FairnessCurve fairness_curve(const ScoreSet& scores, const GroupPartition& partition, FairnessMetric metric,
                             const MetricConfig& config) {
  return fairness_curve(scores, partition, metric, config, scores);
}

std::vector<double> default_alphas() {
  std::vector<double> out;
  for (int k = 0; k <= 10; ++k) out.push_back(k / 10.0);
  return out;
}

AlphaProfile abf_alpha_profile(const ScoreSet& scores, const GroupPartition& partition, const MetricConfig& config,
                               std::span<const double> alphas, const ScoreSet& threshold_source) {
  if (alphas.empty()) throw Error(ErrorCode::kInvalidArgument, "alpha list is empty");
  for (double a : alphas) check_alpha(a);

  // The a/b terms do not depend on alpha, so one sweep serves every alpha.
  const FairnessCurve base = fairness_curve(scores, partition, FairnessMetric::kAbf, config, threshold_source);
  std::vector<double> xs;
  std::vector<const FairnessValue*> defined;
  for (const auto& p : base.points) {
    if (p.value) {
      xs.push_back(p.x);
      defined.push_back(&*p.value);
    }
  }

  AlphaProfile profile;
  double total = 0.0;
  for (double a : alphas) {
    std::vector<double> values;
    values.reserve(defined.size());
    for (const auto* v : defined) values.push_back(1.0 - (a * v->a_term + (1.0 - a) * v->b_term));
    const double auc = normalized_auc(xs, values);
    profile.entries.emplace_back(a, auc);
    total += auc;
  }
  profile.mean_auc = total / static_cast<double>(alphas.size());
  return profile;
}

AlphaProfile abf_alpha_profile(const ScoreSet& scores, const GroupPartition& partition, const MetricConfig& config,
                               std::span<const double> alphas) {
  return abf_alpha_profile(scores, partition, config, alphas, scores);
}

}  // namespace padfair
