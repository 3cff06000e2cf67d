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

#include "padfair/odta.hpp"

#include "padfair/error.hpp"

namespace padfair {

std::vector<double> default_odta_targets() { return {0.005, 0.01, 0.05, 0.10, 0.15, 0.20}; }

OdtaReport odta_report(const ScoreSet& scores, const GroupPartition& partition,
                       std::span<const std::string> sources, std::span<const double> targets) {
  const ScoreSet attached = scores.partition() && *scores.partition() == partition
                                ? scores
                                : ScoreSet(scores.records(), partition);

  std::vector<SortedScores> eval_groups;
  for (const auto& g : partition.groups()) {
    SortedScores s(attached.group_subset(g));
    if (s.attack().empty() || s.bonafide().empty()) {
      throw Error(ErrorCode::kUndefinedRate, "evaluation group '" + g + "' has no " +
                                                 (s.attack().empty() ? "attack" : "bona fide") + " samples");
    }
    eval_groups.push_back(std::move(s));
  }

  OdtaReport report;
  for (const auto& source : sources) {
    SortedScores source_scores;
    if (source == kFusedSource) {
      source_scores = SortedScores(attached);
    } else if (partition.contains(source)) {
      source_scores = SortedScores(attached.group_subset(source));
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "threshold source '" + source + "' is neither 'fused' nor a group of '" + partition.name() + "'");
    }
    if (source_scores.attack().empty()) {
      throw Error(ErrorCode::kUndefinedRate, "threshold source '" + source + "' has no attack samples");
    }
    for (double x : targets) {
      const double tau = source_scores.threshold_at_apcer(x);
      for (std::size_t g = 0; g < eval_groups.size(); ++g) {
        OdtaRow row;
        row.threshold_source = source;
        row.eval_group = partition.groups()[g];
        row.target_apcer = x;
        row.tau = tau;
        row.achieved = eval_groups[g].rates(tau);
        row.one_minus_bpcer = 1.0 - row.achieved.bpcer;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

}  // namespace padfair
