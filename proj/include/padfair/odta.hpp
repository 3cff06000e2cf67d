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

#include <span>
#include <string>
#include <vector>

#include "padfair/data_model.hpp"
#include "padfair/rates.hpp"

namespace padfair {

/// Source name meaning "the union of all groups".
inline constexpr const char* kFusedSource = "fused";

/// The six operating points: 0.5%, 1%, 5%, 10%, 15%, 20% APCER.
std::vector<double> default_odta_targets();

struct OdtaRow {
  std::string threshold_source;
  std::string eval_group;
  double target_apcer = 0.0;
  double tau = 0.0;
  RatePair achieved;
  double one_minus_bpcer = 0.0;
};

struct OdtaReport {
  std::vector<OdtaRow> rows;  // sources x targets x eval groups, in request order
};

/// Places a threshold at each target APCER on each source subset and
/// evaluates it on every group of the partition.
OdtaReport odta_report(const ScoreSet& scores, const GroupPartition& partition,
                       std::span<const std::string> sources, std::span<const double> targets);

}  // namespace padfair
