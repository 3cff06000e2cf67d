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

// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "padfair/error.hpp"
#include "padfair/fairness.hpp"
#include "padfair/fairswap.hpp"
#include "padfair/odta.hpp"
#include "padfair/protocol.hpp"
#include "padfair/rates.hpp"
#include "padfair/synth.hpp"

namespace {

using namespace padfair;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ScoreSet random_set(std::mt19937_64& gen) {
  const std::size_t n = 2 + gen() % 499;  // total <= 500
  const std::size_t n_attack = 1 + gen() % (n - 1);
  const bool coarse = gen() % 2 == 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScoreRecord> recs;
  for (std::size_t i = 0; i < n; ++i) {
    const bool attack = i < n_attack;
    double s = normal(gen) + (attack ? 1.0 : 0.0);
    if (coarse) s = std::round(s * 4.0) / 4.0;
    recs.push_back({"r" + std::to_string(i), s, attack ? PadLabel::kAttack : PadLabel::kBonaFide, {}});
  }
  return ScoreSet(std::move(recs));
}

void rate_oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> ux(0.0005, 0.9995);
  const int sets = 1000;
  long checks = 0, mismatches = 0;
  for (int k = 0; k < sets; ++k) {
    const ScoreSet s = random_set(gen);
    const SortedScores sorted(s);
    std::vector<double> taus;
    for (const auto& r : s.records()) taus.push_back(r.score);
    taus.push_back(sorted.attack().front() - 1.0);
    taus.push_back(sorted.attack().back() + 1.0);
    for (int j = 0; j < 20; ++j) taus.push_back(taus[gen() % taus.size()] + 0.125);
    for (double t : taus) {
      const RatePair want = brute_force_rates(s, t);
      const DecisionThreshold dt(t);
      mismatches += apcer(s, dt) != want.apcer;
      mismatches += bpcer(s, dt) != want.bpcer;
      checks += 2;
    }
    for (int j = 0; j < 5; ++j) {
      const double x = ux(gen);
      mismatches += threshold_at_apcer(s, x).tau != brute_force_threshold_at_apcer(s, x);
      ++checks;
    }
    const auto fast = eer(s);
    const auto slow = brute_force_eer(s);
    mismatches += fast.eer != slow.eer || fast.tau.tau != slow.tau.tau;
    ++checks;
  }
  const double secs = seconds_since(t0);
  report(1, "rate-oracle equivalence", mismatches == 0 && secs < 30.0,
         std::to_string(sets) + " sets, " + std::to_string(checks) + " exact comparisons, " +
             std::to_string(mismatches) + " mismatches, " + fmt("%.2f s (limit 30 s)", secs));
}

void metric_hand_values() {
  const RatePair rates[] = {{0.2, 0.05}, {0.1, 0.15}};
  const double f = fdr_from_rates(rates, 0.5).value;
  const double a = abf_from_rates(rates, 0.5).value;
  const double a_expected = 1.0 - 0.5 * (0.1 / 0.8 + 0.1 / 0.85);
  const bool ok = f == 0.9 && std::abs(a - a_expected) <= 1e-9 && std::abs(a - 0.8786764705882353) <= 1e-9;
  report(2, "metric hand-values", ok, fmt("FDR = %.17g (exact 0.9), ABF = %.17g (expected %.17g, tol 1e-9)", f, a,
                                          a_expected));
}

void random_rate_tuples() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0, abf_defined = 0;
  for (int k = 0; k < 10000; ++k) {
    const bool identical = k % 10 == 0;
    std::vector<RatePair> rates;
    const RatePair shared{u(gen), u(gen)};
    for (std::size_t g = 0, n = 2 + gen() % 5; g < n; ++g) rates.push_back(identical ? shared : RatePair{u(gen), u(gen)});
    // Some tuples touch the boundary rates 0 and 1.
    if (k % 7 == 3) rates[0].apcer = 1.0;
    if (k % 11 == 5) rates[1].bpcer = 0.0;
    const double alpha = u(gen);
    const auto f = fdr_from_rates(rates, alpha).value;
    if (!(f >= 0.0 && f <= 1.0)) ++bad;
    bool all_same = true;
    for (const auto& r : rates) all_same = all_same && r == rates[0];
    if ((f == 1.0) != all_same) ++bad;
    try {
      const auto a = abf_from_rates(rates, alpha).value;
      ++abf_defined;
      if (a > f) ++bad;
      if ((a == 1.0) != all_same) ++bad;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularDenominator) ++bad;
    }
  }
  report(3, "random rate tuples", bad == 0,
         "10000 tuples (" + std::to_string(abf_defined) + " with ABF defined), " + std::to_string(bad) + " violations");
}

ScoreSet two_group_system(double shift_std, std::uint64_t seed) {
  GroupScoreSpec spec;
  spec.partition = "gender";
  spec.groups = {{"male", 0.0, 1.0, 3.0, 1.0, 10000, 10000}, {"female", 0.0, 1.0, 3.0 - shift_std, 1.0, 10000, 10000}};
  return synth_scores(spec, seed);
}

void fair_vs_unfair() {
  const auto t0 = Clock::now();
  const auto fair = two_group_system(0.0, 1234);
  const auto unfair = two_group_system(1.0, 1234);
  const MetricConfig cfg;
  const auto& part = *fair.partition();
  const double fair_fdr = fairness_curve(fair, part, FairnessMetric::kFdr, cfg).auc;
  const double fair_abf = fairness_curve(fair, part, FairnessMetric::kAbf, cfg).auc;
  const double unfair_fdr = fairness_curve(unfair, part, FairnessMetric::kFdr, cfg).auc;
  const double secs = seconds_since(t0);
  const bool ok = fair_fdr >= 0.97 && fair_abf >= 0.95 && fair_fdr - unfair_fdr >= 0.05 && secs < 60.0;
  report(4, "fair vs unfair synthetic systems", ok,
         fmt("fair FDR-AUC %.4f (>= 0.97), fair ABF-AUC %.4f (>= 0.95), ", fair_fdr, fair_abf) +
             fmt("unfair FDR-AUC %.4f (drop %.4f >= 0.05), ", unfair_fdr, fair_fdr - unfair_fdr) +
             fmt("%.2f s (limit 60 s)", secs));
}

void auc_sanity() {
  const SweepGrid grid;
  double worst = 0.0;
  for (double c : {0.0, 0.25, 0.9, 1.0, -0.3}) {
    const std::vector<double> v(grid.size(), c);
    worst = std::max(worst, std::abs(normalized_auc(grid.targets(), v) - c));
  }
  const bool grid_ok = grid.size() == 40 && std::abs(grid.targets().front() - 0.005) < 1e-15 &&
                       std::abs(grid.targets().back() - 0.2) < 1e-15;
  report(5, "AUC sanity", grid_ok && worst <= 1e-12,
         fmt("40-point grid 0.005..0.2, max |AUC - c| = %.3g (tol 1e-12)", worst));
}

RasterImage noise_image(int side, std::mt19937_64& gen) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(side) * side * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(gen());
  return RasterImage(side, side, std::move(px));
}

/// Counts covered pixels per cell directly.
PixelMap coverage_oracle(const PixelMap& map, const SwapRegion& r, const PixelMap& donor, int side) {
  const int m = map.resolution(), cell = side / m;
  PixelMap out = map;
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      int covered = 0;
      for (int y = row * cell; y < (row + 1) * cell; ++y) {
        for (int x = col * cell; x < (col + 1) * cell; ++x) {
          covered += y >= r.top && y < r.top + r.size && x >= r.left && x < r.left + r.size;
        }
      }
      if (2 * covered >= cell * cell) out.set(row, col, donor.at(row, col));
    }
  }
  return out;
}

void fairswap_checks() {
  constexpr int kSide = 224;
  std::mt19937_64 gen(64);
  std::vector<SwapSample> corpus;
  for (int i = 0; i < 64; ++i) {
    SwapSample s;
    s.sample_id = "img" + std::to_string(i);
    s.image = noise_image(kSide, gen);
    s.label = i % 3 == 0 ? PadLabel::kBonaFide : PadLabel::kAttack;
    s.pixel_map = PixelMap::constant_for(s.label, 14);
    s.group = i % 2 ? "female" : "male";
    corpus.push_back(std::move(s));
  }

  // Instrumented pool: records every donor the augmenter loads.
  std::vector<std::size_t> loads;
  std::vector<CandidatePool::Entry> entries;
  for (const auto& s : corpus) entries.push_back({s.sample_id, s.label, s.group});
  const CandidatePool pool(entries, [&](std::size_t i) {
    loads.push_back(i);
    return corpus[i];
  });

  // Identity.
  FairSwapParams off;
  off.p1 = off.p2 = 0.0;
  bool identity = true;
  for (const auto& s : corpus) {
    Rng rng = Rng::for_sample(3, s.sample_id);
    const auto out = fairswap_augment(s, pool, off, rng);
    identity = identity && !out.applied && out.image == s.image && out.pixel_map == s.pixel_map &&
               out.binary_label == s.label;
  }
  identity = identity && loads.empty();

  // Determinism and label safety.
  FairSwapParams on;
  on.p1 = on.p2 = 0.8;
  bool deterministic = true, labels_safe = true;
  std::size_t swaps = 0;
  for (const auto& s : corpus) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      Rng a = Rng::for_sample(seed, s.sample_id), b = Rng::for_sample(seed, s.sample_id);
      loads.clear();
      const auto x = fairswap_augment(s, pool, on, a);
      const auto y = fairswap_augment(s, pool, on, b);
      deterministic = deterministic && x.image == y.image && x.pixel_map == y.pixel_map && x.region == y.region &&
                      x.donor_id == y.donor_id && x.applied == y.applied;
      labels_safe = labels_safe && x.binary_label == s.label;
      for (std::size_t i : loads) {
        labels_safe = labels_safe && corpus[i].sample_id != s.sample_id;
        if (s.label == PadLabel::kBonaFide) labels_safe = labels_safe && corpus[i].label == PadLabel::kBonaFide;
      }
      if (x.applied) {
        ++swaps;
        labels_safe = labels_safe && loads.size() == 2 && corpus[loads[0]].sample_id == *x.donor_id;
      }
    }
  }

  // Map update against the coverage oracle.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> dv(196), mv(196);
  for (auto& v : dv) v = u(gen);
  for (auto& v : mv) v = u(gen);
  const PixelMap donor_map(14, dv), base_map(14, mv);
  int map_mismatch = 0;
  for (int k = 0; k < 1000; ++k) {
    const int size = 1 + static_cast<int>(gen() % kSide);
    const SwapRegion r{static_cast<int>(gen() % (kSide - size + 1)), static_cast<int>(gen() % (kSide - size + 1)), size};
    map_mismatch += update_pixel_map(base_map, r, donor_map, kSide, kSide) != coverage_oracle(base_map, r, donor_map, kSide);
  }

  // Apply rate.
  FairSwapParams rate;
  rate.p1 = 0.3;
  rate.p2 = 0.45;
  Rng rng(2024);
  const int trials = 10000;
  int bf_applied = 0, pa_applied = 0;
  for (int k = 0; k < trials; ++k) {
    bf_applied += fairswap_augment(corpus[0], pool, rate, rng).applied;
    pa_applied += fairswap_augment(corpus[1], pool, rate, rng).applied;
  }
  const double z1 = (bf_applied - trials * rate.p1) / std::sqrt(trials * rate.p1 * (1 - rate.p1));
  const double z2 = (pa_applied - trials * rate.p2) / std::sqrt(trials * rate.p2 * (1 - rate.p2));

  const bool ok = identity && deterministic && labels_safe && swaps > 0 && map_mismatch == 0 && std::abs(z1) <= 3.0 &&
                  std::abs(z2) <= 3.0;
  report(6, "FairSWAP on a 64-image corpus", ok,
         std::string("identity ") + (identity ? "ok" : "broken") + ", determinism " +
             (deterministic ? "ok" : "broken") + ", label safety " + (labels_safe ? "ok" : "broken") + " over " +
             std::to_string(swaps) + " swaps, map oracle mismatches " + std::to_string(map_mismatch) + "/1000, " +
             fmt("apply-rate z = %.2f (p1), %.2f (p2)", z1, z2));
}

void protocol_harness() {
  const auto m = synth_manifest({}, 947);
  std::map<std::string, const SampleRecord*> idx;
  std::set<std::string> subjects;
  for (const auto& r : m.records) {
    idx[r.sample_id] = &r;
    subjects.insert(r.subject_id);
  }
  bool disjoint = true, p12_no_male = true, ratio_ok = true;
  double worst_ratio_dev = 0.0;
  int plans = 0;
  for (const char* name : {"P1.1", "P1.2", "P1.3", "P2.1", "P2.2", "P2.3", "P3:bangs", "P3:beard", "P3:eyeglasses",
                           "P3:makeup", "P3:long_hair", "P3:straight_hair"}) {
    const auto plan = build_protocol(m, ProtocolSpec::parse(name), {1.0, 0.1, 5});
    ++plans;
    std::set<std::string> train_subjects, test_subjects;
    std::size_t bf = 0, pa = 0;
    for (const auto& id : plan.train_ids) {
      const auto* r = idx.at(id);
      train_subjects.insert(r->subject_id);
      (r->pad_label == PadLabel::kAttack ? pa : bf)++;
      if (std::string(name) == "P1.2" && r->attributes.gender == Gender::kMale) p12_no_male = false;
    }
    for (const auto& [label, ids] : plan.test_sets) {
      for (const auto& id : ids) test_subjects.insert(idx.at(id)->subject_id);
    }
    for (const auto& s : train_subjects) disjoint = disjoint && !test_subjects.contains(s);
    const double ratio = static_cast<double>(bf) / static_cast<double>(pa);
    ratio_ok = ratio_ok && ratio >= 0.9 && ratio <= 1.1;
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 1.0));
  }
  report(7, "protocol harness", subjects.size() == 947 && disjoint && p12_no_male && ratio_ok,
         std::to_string(subjects.size()) + " subjects, " + std::to_string(plans) + " plans identity-disjoint: " +
             (disjoint ? "yes" : "no") + ", P1.2 train male-free: " + (p12_no_male ? "yes" : "no") +
             fmt(", worst |ratio - 1| = %.4f (<= 0.1)", worst_ratio_dev));
}

void odta_self_consistency() {
  GroupScoreSpec spec;
  spec.partition = "gender";
  spec.groups = {{"male", 0.0, 1.0, 3.0, 1.0, 5000, 5000}, {"female", 0.0, 1.2, 2.2, 1.3, 3000, 7000}};
  const auto s = synth_scores(spec, 808);
  const auto& part = *s.partition();
  const auto targets = default_odta_targets();
  const auto rep = odta_report(s, part, part.groups(), targets);
  int checked = 0, violations = 0;
  double worst_slack = 1.0;
  for (const auto& row : rep.rows) {
    if (row.threshold_source != row.eval_group) continue;
    ++checked;
    if (row.achieved.apcer > row.target_apcer) ++violations;
    worst_slack = std::min(worst_slack, row.target_apcer - row.achieved.apcer);
  }
  report(8, "ODTA self-consistency", checked == 12 && violations == 0,
         std::to_string(checked) + " (group, target) pairs, " + std::to_string(violations) +
             fmt(" above target, min slack %.3g", worst_slack));
}

}  // namespace

int main() {
  const auto run = [](int id, const char* name, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, name, false, std::string("exception: ") + e.what());
    }
  };
  run(1, "rate-oracle equivalence", rate_oracle_equivalence);
  run(2, "metric hand-values", metric_hand_values);
  run(3, "random rate tuples", random_rate_tuples);
  run(4, "fair vs unfair synthetic systems", fair_vs_unfair);
  run(5, "AUC sanity", auc_sanity);
  run(6, "FairSWAP on a 64-image corpus", fairswap_checks);
  run(7, "protocol harness", protocol_harness);
  run(8, "ODTA self-consistency", odta_self_consistency);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
