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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "padfair/fairness.hpp"
#include "padfair/synth.hpp"
#include "../test_util.hpp"

namespace padfair {
namespace {

using testing::error_code_of;
using testing::make_scores;
using testing::merge_groups;

const GroupPartition kAB("g", {"A", "B"});

/// Scores of one group with `attacks_below` of `n_attack` attacks under 0.5
/// and `bonafides_above` of `n_bonafide` bona fides at or above 0.5.
ScoreSet group_with_rates(const std::string& g, int n_attack, int attacks_below, int n_bonafide, int bonafides_above) {
  std::vector<double> pa, bf;
  for (int i = 0; i < n_attack; ++i) pa.push_back(i < attacks_below ? 0.2 : 0.8);
  for (int i = 0; i < n_bonafide; ++i) bf.push_back(i < bonafides_above ? 0.7 : 0.1);
  return make_scores(bf, pa, g);
}

/// At tau = 0.5: APCER {A:0.2, B:0.1}, BPCER {A:0.05, B:0.15}.
ScoreSet hand_fixture() {
  return merge_groups({group_with_rates("A", 10, 2, 20, 1), group_with_rates("B", 10, 1, 20, 3)}, kAB);
}

TEST(Fdr, HandValue) {
  const auto v = fdr(hand_fixture(), kAB, DecisionThreshold(0.5), 0.5);
  EXPECT_DOUBLE_EQ(v.a_term, 0.1);
  EXPECT_DOUBLE_EQ(v.b_term, 0.1);
  EXPECT_EQ(v.value, 0.9);
  ASSERT_EQ(v.per_group_rates.size(), 2u);
  EXPECT_EQ(v.per_group_rates[0].group, "A");
  EXPECT_EQ(v.per_group_rates[0].rates.apcer, 0.2);
  EXPECT_EQ(v.per_group_rates[1].rates.bpcer, 0.15);
}

TEST(Fdr, AlphaOneIgnoresBpcer) {
  EXPECT_DOUBLE_EQ(fdr(hand_fixture(), kAB, DecisionThreshold(0.5), 1.0).value, 0.9);
}

TEST(Fdr, IdenticalGroupsGiveOne) {
  const auto s = merge_groups({group_with_rates("A", 10, 3, 20, 4), group_with_rates("B", 10, 3, 20, 4)}, kAB);
  EXPECT_EQ(fdr(s, kAB, DecisionThreshold(0.5), 0.5).value, 1.0);
  EXPECT_EQ(abf(s, kAB, DecisionThreshold(0.5), 0.5).value, 1.0);
}

TEST(Fdr, DegenerateGroupNamed) {
  const auto s = merge_groups({group_with_rates("A", 10, 3, 20, 4), group_with_rates("B", 0, 0, 20, 4)}, kAB);
  try {
    fdr(s, kAB, DecisionThreshold(0.5), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedRate);
    EXPECT_NE(std::string(e.what()).find("'B'"), std::string::npos) << e.what();
  }
}

TEST(Fdr, AlphaOutOfRange) {
  EXPECT_EQ(error_code_of([] { fdr(hand_fixture(), kAB, DecisionThreshold(0.5), 1.5); }),
            ErrorCode::kInvalidArgument);
}

TEST(Abf, HandValue) {
  const auto v = abf(hand_fixture(), kAB, DecisionThreshold(0.5), 0.5);
  EXPECT_NEAR(v.a_term, 0.125, 1e-12);
  EXPECT_NEAR(v.b_term, 0.1 / 0.85, 1e-12);
  EXPECT_NEAR(v.value, 1.0 - 0.5 * (0.1 / 0.8 + 0.1 / 0.85), 1e-9);
  EXPECT_NEAR(v.value, 0.8786764705882353, 1e-9);
  EXPECT_FALSE(v.large_discrepancy());
}

TEST(Abf, WorstApcerOneIsSingular) {
  const RatePair r[] = {{1.0, 0.1}, {0.5, 0.1}};
  try {
    abf_from_rates(r, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularDenominator);
    EXPECT_NE(std::string(e.what()).find("APCER"), std::string::npos);
  }
  const RatePair b[] = {{0.1, 0.2}, {0.1, 1.0}};
  EXPECT_EQ(error_code_of([&] { abf_from_rates(b, 0.5); }), ErrorCode::kSingularDenominator);
}

TEST(Abf, LargeDiscrepancyFlaggedNotClamped) {
  const RatePair r[] = {{0.0, 0.0}, {0.95, 0.95}};
  const auto v = abf_from_rates(r, 0.5);
  EXPECT_LT(v.value, 0.0);
  EXPECT_TRUE(v.large_discrepancy());
}

TEST(MaxPairwiseGap, MatchesAllPairsScan) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<RatePair> rates(2 + gen() % 6);
    for (auto& r : rates) r = {u(gen), u(gen)};
    double ga = 0.0, gb = 0.0;
    for (const auto& p : rates) {
      for (const auto& q : rates) {
        ga = std::max(ga, std::abs(p.apcer - q.apcer));
        gb = std::max(gb, std::abs(p.bpcer - q.bpcer));
      }
    }
    const auto gap = max_pairwise_gap(rates);
    ASSERT_EQ(gap.apcer, ga);
    ASSERT_EQ(gap.bpcer, gb);
  }
}

TEST(FairnessProperties, RandomRateTuples) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const bool identical = trial % 10 == 0;
    std::vector<RatePair> rates;
    const RatePair shared{u(gen), u(gen)};
    for (std::size_t g = 0, n = 2 + gen() % 4; g < n; ++g) {
      rates.push_back(identical ? shared : RatePair{u(gen), u(gen)});
    }
    const double alpha = u(gen);
    const auto f = fdr_from_rates(rates, alpha);
    ASSERT_GE(f.value, 0.0);
    ASSERT_LE(f.value, 1.0);
    const auto a = abf_from_rates(rates, alpha);
    ASSERT_LE(a.value, f.value + 1e-15);
    ASSERT_EQ(f.value == 1.0, identical);
    ASSERT_EQ(a.value == 1.0, identical);
  }
}

TEST(SweepGrid, DefaultIsFortyPoints) {
  const SweepGrid g;
  ASSERT_EQ(g.size(), 40u);
  EXPECT_DOUBLE_EQ(g.targets().front(), 0.005);
  EXPECT_DOUBLE_EQ(g.targets().back(), 0.2);
  const auto l = SweepGrid::linspace(0.005, 0.2, 0.005);
  ASSERT_EQ(l.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(l.targets()[i], g.targets()[i], 1e-15);
}

TEST(SweepGrid, RejectsBadTargets) {
  EXPECT_EQ(error_code_of([] { SweepGrid(std::vector<double>{}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([] { SweepGrid({0.1, 0.05}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([] { SweepGrid({0.0, 0.05}); }), ErrorCode::kInvalidArgument);
}

TEST(NormalizedAuc, ConstantCurve) {
  const SweepGrid g;
  std::vector<double> v(g.size(), 0.9);
  EXPECT_NEAR(normalized_auc(g.targets(), v), 0.9, 1e-12);
}

TEST(NormalizedAuc, SinglePointIsItsValue) {
  const double x[] = {0.05}, v[] = {0.42};
  EXPECT_EQ(normalized_auc(x, v), 0.42);
}

TEST(NormalizedAuc, LinearCurveIsMidpoint) {
  const double x[] = {0.0, 0.5, 1.0}, v[] = {0.0, 0.5, 1.0};
  EXPECT_DOUBLE_EQ(normalized_auc(x, v), 0.5);
}

ScoreSet two_gaussian_groups(double attack_shift_b, std::size_t n, std::uint64_t seed) {
  GroupScoreSpec spec;
  spec.partition = "g";
  spec.groups = {{"A", 0.0, 1.0, 3.0, 1.0, n, n}, {"B", 0.0, 1.0, 3.0 - attack_shift_b, 1.0, n, n}};
  return synth_scores(spec, seed);
}

TEST(FairnessCurve, IdenticalGroupsStayNearOne) {
  const auto s = two_gaussian_groups(0.0, 10000, 101);
  const auto curve = fairness_curve(s, kAB, FairnessMetric::kFdr, MetricConfig{});
  ASSERT_EQ(curve.points.size(), 40u);
  for (const auto& p : curve.points) {
    ASSERT_TRUE(p.value.has_value());
    EXPECT_GE(p.value->value, 0.97) << p.x;
    EXPECT_LE(p.value->value, 1.0);
    EXPECT_EQ(p.value->tau.target_apcer, p.x);
  }
  EXPECT_GE(curve.auc, 0.97);
  EXPECT_EQ(curve.excluded_points, 0u);
}

TEST(FairnessCurve, SinglePointGrid) {
  const auto s = two_gaussian_groups(0.5, 500, 3);
  MetricConfig cfg;
  cfg.sweep = SweepGrid({0.05});
  const auto curve = fairness_curve(s, kAB, FairnessMetric::kAbf, cfg);
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_EQ(curve.auc, curve.points[0].value->value);
}

TEST(FairnessCurve, ThresholdSourceDrivesTau) {
  const auto s = two_gaussian_groups(1.0, 2000, 5);
  const auto b_only = s.group_subset("B");
  const auto curve = fairness_curve(s, kAB, FairnessMetric::kFdr, MetricConfig{}, b_only);
  for (const auto& p : curve.points) {
    EXPECT_EQ(p.value->tau.tau, threshold_at_apcer(b_only, p.x).tau);
  }
}

TEST(FairnessCurve, SingularPointsAreExcluded) {
  // Thresholds from A land at 5, 6 and 7. B's APCER is 0.5 at 5 and 1 above.
  const auto s = merge_groups({make_scores({0.0, 0.1}, {5.0, 6.0, 7.0, 8.0}, "A"),
                               make_scores({0.0, 0.1}, {1.0, 5.5}, "B")},
                              kAB);
  MetricConfig cfg;
  cfg.sweep = SweepGrid({0.1, 0.3, 0.6});
  const auto curve = fairness_curve(s, kAB, FairnessMetric::kAbf, cfg, s.group_subset("A"));
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(curve.excluded_points, 2u);
  ASSERT_TRUE(curve.points[0].value.has_value());
  EXPECT_FALSE(curve.points[1].value.has_value());
  EXPECT_FALSE(curve.points[2].undefined_reason.empty());
  EXPECT_EQ(curve.auc, curve.points[0].value->value);

  // FDR stays defined where ABF is singular.
  const auto fdr_curve = fairness_curve(s, kAB, FairnessMetric::kFdr, cfg, s.group_subset("A"));
  EXPECT_EQ(fdr_curve.excluded_points, 0u);
}

TEST(FairnessCurve, AllPointsSingularIsAnError) {
  const auto s = merge_groups({make_scores({0.0, 0.1}, {5.0, 6.0, 7.0, 8.0}, "A"),
                               make_scores({0.0, 0.1}, {1.0, 1.1}, "B")},
                              kAB);
  EXPECT_EQ(error_code_of([&] {
              fairness_curve(s, kAB, FairnessMetric::kAbf, MetricConfig{}, s.group_subset("A"));
            }),
            ErrorCode::kSingularDenominator);
}

TEST(AlphaProfile, FairSystemIsOneEverywhere) {
  const auto s = merge_groups({group_with_rates("A", 10, 3, 20, 4), group_with_rates("B", 10, 3, 20, 4)}, kAB);
  MetricConfig cfg;
  cfg.sweep = SweepGrid({0.1, 0.2});
  const auto alphas = default_alphas();
  const auto profile = abf_alpha_profile(s, kAB, cfg, alphas);
  ASSERT_EQ(profile.entries.size(), 11u);
  for (const auto& [a, auc] : profile.entries) EXPECT_EQ(auc, 1.0) << a;
  EXPECT_EQ(profile.mean_auc, 1.0);
}

TEST(AlphaProfile, LinearInAlphaWhenOnlyBpcerDiffers) {
  // Both groups share their attack scores, so the APCER term is 0. Every
  // threshold on the grid sits between -1 and 20, giving BPCER 0 for A and
  // 1/6 for B: b_term = (1/6) / (5/6) = 0.2.
  const std::vector<double> pa{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  const std::vector<double> bf_a(6, -1.0);
  std::vector<double> bf_b(6, -1.0);
  bf_b[0] = 20.0;
  const auto s = merge_groups({make_scores(bf_a, pa, "A"), make_scores(bf_b, pa, "B")}, kAB);
  MetricConfig cfg;
  cfg.sweep = SweepGrid({0.1, 0.15, 0.2});
  const auto base = fairness_curve(s, kAB, FairnessMetric::kAbf, cfg);
  for (const auto& p : base.points) {
    ASSERT_EQ(p.value->a_term, 0.0);
    ASSERT_NEAR(p.value->b_term, 0.2, 1e-12);
  }
  const double alphas[] = {0.0, 0.25, 0.5, 1.0};
  const auto profile = abf_alpha_profile(s, kAB, cfg, alphas);
  for (const auto& [a, auc] : profile.entries) EXPECT_NEAR(auc, 1.0 - (1.0 - a) * 0.2, 1e-12);
}

TEST(AlphaProfile, SingleAlphaMatchesCurve) {
  const auto s = two_gaussian_groups(1.0, 2000, 9);
  const double alphas[] = {0.5};
  const auto profile = abf_alpha_profile(s, kAB, MetricConfig{}, alphas);
  const auto curve = fairness_curve(s, kAB, FairnessMetric::kAbf, MetricConfig{});
  ASSERT_EQ(profile.entries.size(), 1u);
  EXPECT_NEAR(profile.entries[0].second, curve.auc, 1e-12);
}

}  // namespace
}  // namespace padfair
