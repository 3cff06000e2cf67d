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
#include <optional>
#include <string>
#include <vector>

#include "padfair/data_model.hpp"
#include "padfair/fairness.hpp"
#include "padfair/odta.hpp"
#include "padfair/rates.hpp"

namespace padfair {

inline constexpr int kReportSchemaVersion = 1;

struct GridConfig {
  double start = 0.005;
  double end = 0.2;
  double step = 0.005;
};

struct EvaluationConfig {
  std::string partition = "gender";
  double alpha = 0.5;
  GridConfig grid;
  std::vector<double> targets = default_odta_targets();
  std::vector<std::string> sources;  // empty: fused plus every group
  std::vector<double> alphas = default_alphas();
  std::uint64_t seed = 0;
};

struct GroupEer {
  std::string group;
  std::size_t n_bonafide = 0;
  std::size_t n_attack = 0;
  EerResult result;
};

/// Everything `padfair evaluate` reports for one score file.
struct ReportBundle {
  EvaluationConfig config;
  std::size_t total_samples = 0;
  std::size_t unannotated_samples = 0;  // dropped: no group under the partition
  std::vector<GroupEer> eer_table;       // fused first, then partition order
  std::optional<FairnessCurve> fdr_curve;
  std::optional<FairnessCurve> abf_curve;
  std::optional<AlphaProfile> alpha_profile;
  std::optional<OdtaReport> odta;
};

/// Runs every module over `scores`. Without group annotations only the
/// fused EER is filled in.
ReportBundle build_report(const ScoreSet& scores, const EvaluationConfig& config, bool with_groups);

std::string report_to_json(const ReportBundle& report);

/// Columns: x,tau,value,a_term,b_term. Undefined points have empty values.
std::string curve_to_csv(const FairnessCurve& curve);

/// Columns: x,source,group,one_minus_bpcer,apcer,bpcer,tau.
std::string odta_to_csv(const OdtaReport& report);

/// Columns: alpha,auc.
std::string alpha_profile_to_csv(const AlphaProfile& profile);

/// Minimal static line chart of a curve.
std::string curve_to_svg(const FairnessCurve& curve, const std::string& title);

struct CurveCsvRow {
  double x = 0.0;
  std::optional<double> tau, value, a_term, b_term;
};
std::vector<CurveCsvRow> parse_curve_csv(std::string_view text);

}  // namespace padfair
