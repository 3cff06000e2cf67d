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

#include "padfair/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "padfair/error.hpp"
#include "padfair/io.hpp"

namespace padfair {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json rates_json(const RatePair& r) { return {{"apcer", r.apcer}, {"bpcer", r.bpcer}}; }

ordered_json curve_json(const FairnessCurve& curve) {
  ordered_json j;
  j["metric"] = to_string(curve.metric);
  j["alpha"] = curve.alpha;
  j["auc"] = curve.auc;
  j["excluded_points"] = curve.excluded_points;
  ordered_json points = ordered_json::array();
  for (const auto& p : curve.points) {
    ordered_json pj;
    pj["x"] = p.x;
    if (p.value) {
      pj["tau"] = p.value->tau.tau;
      pj["value"] = p.value->value;
      pj["a_term"] = p.value->a_term;
      pj["b_term"] = p.value->b_term;
      if (curve.metric == FairnessMetric::kAbf) pj["large_discrepancy"] = p.value->large_discrepancy();
      ordered_json groups = ordered_json::object();
      for (const auto& g : p.value->per_group_rates) groups[g.group] = rates_json(g.rates);
      pj["per_group_rates"] = std::move(groups);
    } else {
      pj["value"] = nullptr;
      pj["undefined_reason"] = p.undefined_reason;
    }
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  return j;
}

std::optional<double> parse_optional_double(const std::string& field) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParse, "invalid number \"" + field + "\" in curve CSV");
  }
  return v;
}

}  // namespace

ReportBundle build_report(const ScoreSet& scores, const EvaluationConfig& config, bool with_groups) {
  ReportBundle report;
  report.config = config;
  report.total_samples = scores.size();

  if (!with_groups) {
    const auto& fused = scores;
    report.eer_table.push_back({kFusedSource, fused.count(PadLabel::kBonaFide), fused.count(PadLabel::kAttack),
                                eer(fused, kFusedSource)});
    return report;
  }

  const GroupPartition partition = standard_partition(config.partition);
  const ScoreSet grouped = scores.restricted_to(partition);
  report.unannotated_samples = scores.size() - grouped.size();
  if (grouped.empty()) {
    throw Error(ErrorCode::kEmptySelection, "no sample is annotated for partition '" + partition.name() + "'");
  }

  report.eer_table.push_back({kFusedSource, grouped.count(PadLabel::kBonaFide), grouped.count(PadLabel::kAttack),
                              eer(grouped, kFusedSource)});
  for (const auto& g : partition.groups()) {
    const ScoreSet subset = grouped.group_subset(g);
    GroupEer row{g, subset.count(PadLabel::kBonaFide), subset.count(PadLabel::kAttack), {}};
    if (row.n_attack == 0 || row.n_bonafide == 0) {
      throw Error(ErrorCode::kUndefinedRate, "group '" + g + "' has no " + (row.n_attack == 0 ? "attack" : "bona fide") +
                                                 " samples");
    }
    row.result = eer(subset, g);
    report.eer_table.push_back(std::move(row));
  }

  MetricConfig metric;
  metric.alpha = config.alpha;
  metric.sweep = SweepGrid::linspace(config.grid.start, config.grid.end, config.grid.step);
  report.fdr_curve = fairness_curve(grouped, partition, FairnessMetric::kFdr, metric);
  report.abf_curve = fairness_curve(grouped, partition, FairnessMetric::kAbf, metric);
  report.alpha_profile = abf_alpha_profile(grouped, partition, metric, config.alphas);

  std::vector<std::string> sources = config.sources;
  if (sources.empty()) {
    sources.push_back(kFusedSource);
    sources.insert(sources.end(), partition.groups().begin(), partition.groups().end());
  }
  report.config.sources = sources;
  report.odta = odta_report(grouped, partition, sources, config.targets);
  return report;
}

std::string report_to_json(const ReportBundle& report) {
  const auto& c = report.config;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = {{"partition", c.partition},
                 {"alpha", c.alpha},
                 {"grid", {{"start", c.grid.start}, {"end", c.grid.end}, {"step", c.grid.step}}},
                 {"targets", c.targets},
                 {"sources", c.sources},
                 {"alphas", c.alphas},
                 {"seed", c.seed}};
  j["samples"] = {{"total", report.total_samples}, {"unannotated", report.unannotated_samples}};

  ordered_json eers = ordered_json::array();
  for (const auto& row : report.eer_table) {
    eers.push_back({{"group", row.group},
                    {"n_bonafide", row.n_bonafide},
                    {"n_attack", row.n_attack},
                    {"eer", row.result.eer},
                    {"tau", row.result.tau.tau},
                    {"apcer", row.result.rates.apcer},
                    {"bpcer", row.result.rates.bpcer}});
  }
  j["eer"] = std::move(eers);

  if (report.fdr_curve) j["fdr"] = curve_json(*report.fdr_curve);
  if (report.abf_curve) j["abf"] = curve_json(*report.abf_curve);
  if (report.alpha_profile) {
    ordered_json entries = ordered_json::array();
    for (const auto& [a, auc] : report.alpha_profile->entries) entries.push_back({{"alpha", a}, {"auc", auc}});
    j["alpha_profile"] = {{"entries", std::move(entries)}, {"mean_auc", report.alpha_profile->mean_auc}};
  }
  if (report.odta) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.odta->rows) {
      rows.push_back({{"source", r.threshold_source},
                      {"group", r.eval_group},
                      {"x", r.target_apcer},
                      {"tau", r.tau},
                      {"apcer", r.achieved.apcer},
                      {"bpcer", r.achieved.bpcer},
                      {"one_minus_bpcer", r.one_minus_bpcer}});
    }
    j["odta"] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

std::string curve_to_csv(const FairnessCurve& curve) {
  std::string out = "x,tau,value,a_term,b_term\n";
  for (const auto& p : curve.points) {
    out += format_double(p.x);
    if (p.value) {
      out += ',' + format_double(p.value->tau.tau) + ',' + format_double(p.value->value) + ',' +
             format_double(p.value->a_term) + ',' + format_double(p.value->b_term);
    } else {
      out += ",,,,";
    }
    out += '\n';
  }
  return out;
}

std::vector<CurveCsvRow> parse_curve_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "x,tau,value,a_term,b_term") {
    throw Error(ErrorCode::kParse, "curve CSV must start with header x,tau,value,a_term,b_term");
  }
  std::vector<CurveCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 5) throw Error(ErrorCode::kParse, "curve CSV row needs 5 columns");
    CurveCsvRow row;
    auto x = parse_optional_double(f[0]);
    if (!x) throw Error(ErrorCode::kParse, "curve CSV row is missing x");
    row.x = *x;
    row.tau = parse_optional_double(f[1]);
    row.value = parse_optional_double(f[2]);
    row.a_term = parse_optional_double(f[3]);
    row.b_term = parse_optional_double(f[4]);
    rows.push_back(row);
  }
  return rows;
}

std::string odta_to_csv(const OdtaReport& report) {
  std::string out = "x,source,group,one_minus_bpcer,apcer,bpcer,tau\n";
  for (const auto& r : report.rows) {
    out += format_double(r.target_apcer) + ',' + r.threshold_source + ',' + r.eval_group + ',' +
           format_double(r.one_minus_bpcer) + ',' + format_double(r.achieved.apcer) + ',' +
           format_double(r.achieved.bpcer) + ',' + format_double(r.tau) + '\n';
  }
  return out;
}

std::string alpha_profile_to_csv(const AlphaProfile& profile) {
  std::string out = "alpha,auc\n";
  for (const auto& [a, auc] : profile.entries) out += format_double(a) + ',' + format_double(auc) + '\n';
  return out;
}

std::string curve_to_svg(const FairnessCurve& curve, const std::string& title) {
  constexpr double kW = 640, kH = 400, kPad = 50;
  double xmin = curve.points.empty() ? 0.0 : curve.points.front().x;
  double xmax = curve.points.empty() ? 1.0 : curve.points.back().x;
  if (xmax <= xmin) xmax = xmin + 1.0;
  double ymin = 0.0, ymax = 1.0;
  for (const auto& p : curve.points) {
    if (p.value) ymin = std::min(ymin, p.value->value);
  }
  const auto sx = [&](double x) { return kPad + (x - xmin) / (xmax - xmin) * (kW - 2 * kPad); };
  const auto sy = [&](double y) { return kH - kPad - (y - ymin) / (ymax - ymin) * (kH - 2 * kPad); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title
      << " (AUC " << format_double(std::round(curve.auc * 1000.0) / 1000.0) << ")</text>\n";
  svg << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\"" << kH - kPad
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">APCER target x</text>\n";
  svg << "<text x=\"" << kPad - 6 << "\" y=\"" << sy(ymax) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(ymax) << "</text>\n";
  svg << "<text x=\"" << kPad - 6 << "\" y=\"" << sy(ymin) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(ymin) << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& p : curve.points) {
    if (p.value) svg << sx(p.x) << ',' << sy(p.value->value) << ' ';
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace padfair
