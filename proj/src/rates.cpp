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

#include "padfair/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "padfair/error.hpp"

namespace padfair {

namespace {

void require_attacks(std::size_t n, const std::string& source) {
  if (n == 0) throw Error(ErrorCode::kUndefinedRate, "APCER undefined: no attack samples in '" + source + "'");
}

void require_bonafides(std::size_t n, const std::string& source) {
  if (n == 0) throw Error(ErrorCode::kUndefinedRate, "BPCER undefined: no bona fide samples in '" + source + "'");
}

}  // namespace

DecisionThreshold::DecisionThreshold(double t, std::string src, std::optional<double> target)
    : tau(t), source(std::move(src)), target_apcer(target) {
  if (!std::isfinite(tau)) throw Error(ErrorCode::kInvalidArgument, "decision threshold must be finite");
  if (target_apcer && !(*target_apcer >= 0.0 && *target_apcer <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target APCER must lie in [0, 1]");
  }
}

SortedScores::SortedScores(const ScoreSet& scores)
    : SortedScores(scores.scores(PadLabel::kAttack), scores.scores(PadLabel::kBonaFide)) {}

SortedScores::SortedScores(std::vector<double> attack, std::vector<double> bonafide)
    : attack_(std::move(attack)), bonafide_(std::move(bonafide)) {
  std::sort(attack_.begin(), attack_.end());
  std::sort(bonafide_.begin(), bonafide_.end());
}

double SortedScores::apcer(double tau) const {
  require_attacks(attack_.size(), "score set");
  const auto below = std::lower_bound(attack_.begin(), attack_.end(), tau) - attack_.begin();
  return static_cast<double>(below) / static_cast<double>(attack_.size());
}

double SortedScores::bpcer(double tau) const {
  require_bonafides(bonafide_.size(), "score set");
  const auto below = std::lower_bound(bonafide_.begin(), bonafide_.end(), tau) - bonafide_.begin();
  return static_cast<double>(bonafide_.size() - static_cast<std::size_t>(below)) /
         static_cast<double>(bonafide_.size());
}

double SortedScores::threshold_at_apcer(double x) const {
  require_attacks(attack_.size(), "score set");
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::kInvalidArgument, "target APCER must lie in (0, 1)");
  const auto n = attack_.size();
  const double dn = static_cast<double>(n);
  // m = floor(x * n), nudged so that m / n <= x holds in floating point, the
  // same arithmetic apcer() uses.
  auto m = static_cast<std::size_t>(std::floor(x * dn));
  while (m > 0 && static_cast<double>(m) / dn > x) --m;
  while (m + 1 < n && static_cast<double>(m + 1) / dn <= x) ++m;
  m = std::min(m, n - 1);
  return attack_[m];
}

double apcer(const ScoreSet& scores, const DecisionThreshold& tau) {
  auto attacks = scores.scores(PadLabel::kAttack);
  require_attacks(attacks.size(), tau.source);
  return SortedScores(std::move(attacks), {}).apcer(tau.tau);
}

double bpcer(const ScoreSet& scores, const DecisionThreshold& tau) {
  auto bonafides = scores.scores(PadLabel::kBonaFide);
  require_bonafides(bonafides.size(), tau.source);
  return SortedScores({}, std::move(bonafides)).bpcer(tau.tau);
}

DecisionThreshold threshold_at_apcer(const ScoreSet& scores, double x, std::string source) {
  auto attacks = scores.scores(PadLabel::kAttack);
  require_attacks(attacks.size(), source);
  SortedScores sorted(std::move(attacks), {});
  return DecisionThreshold(sorted.threshold_at_apcer(x), std::move(source), x);
}

std::vector<double> eer_candidates(std::span<const double> attack, std::span<const double> bonafide) {
  std::vector<double> distinct(attack.begin(), attack.end());
  distinct.insert(distinct.end(), bonafide.begin(), bonafide.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> out;
  out.reserve(distinct.size() * 2);
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    out.push_back(distinct[i]);
    if (i + 1 < distinct.size()) {
      const double mid = distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0;
      if (mid > distinct[i] && mid < distinct[i + 1]) out.push_back(mid);
    }
  }
  // Everything classified bona fide. The opposite extreme (everything
  // classified attack) is already reached at the smallest score.
  if (!distinct.empty()) out.push_back(std::nextafter(distinct.back(), std::numeric_limits<double>::infinity()));
  return out;
}

EerResult eer(const SortedScores& scores, std::string source) {
  require_attacks(scores.attack().size(), source);
  require_bonafides(scores.bonafide().size(), source);

  const auto candidates = eer_candidates(scores.attack(), scores.bonafide());
  double best_gap = std::numeric_limits<double>::infinity();
  double best_tau = candidates.front();
  RatePair best_rates;
  for (double t : candidates) {
    const RatePair r = scores.rates(t);
    const double gap = std::abs(r.apcer - r.bpcer);
    if (gap < best_gap) {  // strict: ties keep the smaller tau
      best_gap = gap;
      best_tau = t;
      best_rates = r;
    }
  }
  EerResult result;
  result.eer = (best_rates.apcer + best_rates.bpcer) / 2.0;
  result.tau = DecisionThreshold(best_tau, std::move(source));
  result.rates = best_rates;
  return result;
}

EerResult eer(const ScoreSet& scores, std::string source) {
  return eer(SortedScores(scores), std::move(source));
}

}  // namespace padfair
