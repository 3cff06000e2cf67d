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

#include "padfair/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "padfair/data_model.hpp"
#include "padfair/error.hpp"
#include "padfair/fairness.hpp"
#include "padfair/fairswap.hpp"
#include "padfair/io.hpp"
#include "padfair/odta.hpp"
#include "padfair/protocol.hpp"
#include "padfair/report.hpp"
#include "padfair/synth.hpp"

namespace padfair {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string manifest;
  std::string scores;
  std::string partition = "gender";
  double alpha = 0.5;
  double grid_start = 0.005;
  double grid_end = 0.2;
  double grid_step = 0.005;
  std::vector<double> targets = default_odta_targets();
  std::vector<std::string> sources;
  std::uint64_t seed = 0;
  std::string out;
  bool svg = false;
};

struct SplitOptions {
  std::string manifest;
  std::string protocol;
  std::uint64_t seed = 0;
  double target_ratio = 1.0;
  double tolerance = 0.1;
  std::optional<double> resplit_fraction;
  std::string out;
};

struct AugmentOptions {
  std::string manifest;
  std::string image_root = ".";
  std::string map_root;
  std::string out;
  std::string partition = "gender";
  std::string map_format = "csv";
  FairSwapParams params;
  bool no_cross_group = false;
};

struct SynthOptions {
  std::string out;
  std::string manifest_out;
  std::string partition = "gender";
  std::size_t n = 1000;
  double bonafide_mean = 0.0;
  double attack_mean = 3.0;
  double std = 1.0;
  double shift = 0.0;
  std::uint64_t seed = 0;
};

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "RNG seed (falls back to $PADFAIR_SEED)")->envname("PADFAIR_SEED");
}

void add_evaluation_options(CLI::App* cmd, CommonOptions& o, bool need_manifest) {
  auto* m = cmd->add_option("--manifest", o.manifest, "sample manifest (JSON Lines)");
  if (need_manifest) m->required();
  cmd->add_option("--scores", o.scores, "score CSV")->required();
  cmd->add_option("--partition", o.partition, "gender|occlusion|bangs|beard|eyeglasses|makeup|long_hair|straight_hair");
  cmd->add_option("--alpha", o.alpha, "APCER weight in FDR/ABF")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--grid-start", o.grid_start);
  cmd->add_option("--grid-end", o.grid_end);
  cmd->add_option("--grid-step", o.grid_step);
  cmd->add_option("--targets", o.targets, "ODTA APCER targets")->delimiter(',');
  cmd->add_option("--sources", o.sources, "ODTA threshold sources (fused or group ids)")->delimiter(',');
  cmd->add_option("--out", o.out, "output directory")->required();
  add_seed(cmd, o.seed);
}

EvaluationConfig to_config(const CommonOptions& o) {
  EvaluationConfig c;
  c.partition = o.partition;
  c.alpha = o.alpha;
  c.grid = {o.grid_start, o.grid_end, o.grid_step};
  c.targets = o.targets;
  c.sources = o.sources;
  c.seed = o.seed;
  return c;
}

/// Parses both inputs and attaches the requested partition.
struct LoadedScores {
  std::optional<SampleManifest> manifest;
  ScoreSet scores;
};

LoadedScores load_inputs(const CommonOptions& o) {
  LoadedScores in;
  if (!o.manifest.empty()) in.manifest = load_manifest(o.manifest);
  in.scores = load_scores(o.scores, in.manifest ? &*in.manifest : nullptr);
  return in;
}

void write_curves(const fs::path& dir, const ReportBundle& report, bool svg) {
  if (report.fdr_curve) {
    write_file_atomic(dir / "fdr_curve.csv", curve_to_csv(*report.fdr_curve));
    if (svg) write_file_atomic(dir / "fdr_curve.svg", curve_to_svg(*report.fdr_curve, "FDR"));
  }
  if (report.abf_curve) {
    write_file_atomic(dir / "abf_curve.csv", curve_to_csv(*report.abf_curve));
    if (svg) write_file_atomic(dir / "abf_curve.svg", curve_to_svg(*report.abf_curve, "ABF"));
  }
}

int cmd_evaluate(const CommonOptions& o, std::ostream& out) {
  const auto in = load_inputs(o);
  const auto report = build_report(in.scores, to_config(o), in.manifest.has_value());
  const fs::path dir(o.out);
  write_file_atomic(dir / "report.json", report_to_json(report));
  write_curves(dir, report, o.svg);
  if (report.odta) write_file_atomic(dir / "odta.csv", odta_to_csv(*report.odta));
  if (report.alpha_profile) write_file_atomic(dir / "alpha_profile.csv", alpha_profile_to_csv(*report.alpha_profile));

  for (const auto& row : report.eer_table) {
    out << "EER[" << row.group << "] = " << format_double(row.result.eer) << "\n";
  }
  if (report.fdr_curve) out << "FDR-AUC = " << format_double(report.fdr_curve->auc) << "\n";
  if (report.abf_curve) {
    out << "ABF-AUC = " << format_double(report.abf_curve->auc);
    if (report.abf_curve->excluded_points) out << " (" << report.abf_curve->excluded_points << " undefined points excluded)";
    out << "\n";
  }
  if (!in.manifest) out << "no manifest given: group analysis skipped\n";
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, std::ostream& out) {
  const auto in = load_inputs(o);
  const GroupPartition partition = standard_partition(o.partition);
  const ScoreSet grouped = in.scores.restricted_to(partition);
  MetricConfig metric;
  metric.alpha = o.alpha;
  metric.sweep = SweepGrid::linspace(o.grid_start, o.grid_end, o.grid_step);
  ReportBundle report;
  report.fdr_curve = fairness_curve(grouped, partition, FairnessMetric::kFdr, metric);
  report.abf_curve = fairness_curve(grouped, partition, FairnessMetric::kAbf, metric);
  write_curves(fs::path(o.out), report, o.svg);
  out << "FDR-AUC = " << format_double(report.fdr_curve->auc) << "\n";
  out << "ABF-AUC = " << format_double(report.abf_curve->auc) << "\n";
  return kExitOk;
}

int cmd_odta(const CommonOptions& o, std::ostream& out) {
  const auto in = load_inputs(o);
  const GroupPartition partition = standard_partition(o.partition);
  const ScoreSet grouped = in.scores.restricted_to(partition);
  std::vector<std::string> sources = o.sources;
  if (sources.empty()) {
    sources.push_back(kFusedSource);
    sources.insert(sources.end(), partition.groups().begin(), partition.groups().end());
  }
  const auto report = odta_report(grouped, partition, sources, o.targets);
  write_file_atomic(fs::path(o.out) / "odta.csv", odta_to_csv(report));
  out << report.rows.size() << " ODTA rows written\n";
  return kExitOk;
}

int cmd_split(const SplitOptions& o, std::ostream& out) {
  SampleManifest manifest = load_manifest(o.manifest);
  if (o.resplit_fraction) {
    auto [train, test] = identity_disjoint_split(manifest.records, {*o.resplit_fraction, o.seed});
    manifest.records = std::move(train);
    manifest.records.insert(manifest.records.end(), test.begin(), test.end());
    manifest.split_overlap.clear();
  }
  const auto spec = ProtocolSpec::parse(o.protocol);
  const auto plan = build_protocol(manifest, spec, {o.target_ratio, o.tolerance, o.seed});
  write_file_atomic(o.out, serialize_plan(plan));
  out << plan.protocol << ": " << plan.train_ids.size() << " training entries";
  for (const auto& [label, ids] : plan.test_sets) out << ", " << label << " " << ids.size();
  out << "\n";
  return kExitOk;
}

std::string safe_name(std::string id) {
  for (auto& c : id) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return id;
}

int cmd_augment(AugmentOptions o, std::ostream& out) {
  const SampleManifest manifest = load_manifest(o.manifest);
  o.params.cross_group = !o.no_cross_group;
  if (o.map_format != "csv" && o.map_format != "png") {
    throw Error(ErrorCode::kInvalidArgument, "--map-format must be csv or png");
  }

  std::vector<const SampleRecord*> train;
  for (const auto& r : manifest.records) {
    if (r.split != Split::kTrain) continue;
    if (!r.media_path) throw Error(ErrorCode::kParse, "train sample '" + r.sample_id + "' has no media_path");
    train.push_back(&r);
  }
  if (train.empty()) throw Error(ErrorCode::kEmptySelection, "manifest has no training samples");

  const fs::path image_root(o.image_root);
  const auto load_sample = [&](const SampleRecord& r) {
    SwapSample s;
    s.sample_id = r.sample_id;
    s.label = r.pad_label;
    s.group = standard_group(o.partition, r.attributes).value_or("");
    s.image = load_png(image_root / *r.media_path);
    const fs::path map_file = o.map_root.empty() ? fs::path() : fs::path(o.map_root) / (safe_name(r.sample_id) + ".csv");
    if (!map_file.empty() && fs::exists(map_file)) {
      s.pixel_map = parse_pixel_map_csv(read_text_file(map_file));
    } else {
      s.pixel_map = PixelMap::constant_for(r.pad_label, o.params.map_resolution);
    }
    return s;
  };

  std::vector<CandidatePool::Entry> entries;
  for (const auto* r : train) {
    entries.push_back({r->sample_id, r->pad_label, standard_group(o.partition, r->attributes).value_or("")});
  }
  const CandidatePool pool(std::move(entries), [&](std::size_t i) { return load_sample(*train[i]); });

  const fs::path out_dir(o.out);
  std::string out_manifest;
  std::size_t applied = 0;
  for (const auto* r : train) {
    const SwapSample sample = load_sample(*r);
    Rng rng = Rng::for_sample(o.params.seed, r->sample_id);
    const AugmentedSample result = fairswap_augment(sample, pool, o.params, rng);
    applied += result.applied;

    const std::string stem = safe_name(r->sample_id);
    const std::string image_rel = "images/" + stem + ".png";
    const std::string map_rel = "maps/" + stem + "." + o.map_format;
    save_png(out_dir / image_rel, result.image);
    write_file_atomic(out_dir / map_rel, o.map_format == "csv" ? serialize_pixel_map_csv(*result.pixel_map)
                                                               : encode_pixel_map_png(*result.pixel_map));

    nlohmann::ordered_json j;
    j["sample_id"] = r->sample_id;
    j["subject_id"] = r->subject_id;
    j["source_media"] = *r->media_path;
    j["media_path"] = image_rel;
    j["map_path"] = map_rel;
    j["pad_label"] = to_string(result.binary_label);
    j["applied"] = result.applied;
    if (result.region) {
      j["region"] = {{"top", result.region->top}, {"left", result.region->left}, {"size", result.region->size}};
      j["donor_id"] = *result.donor_id;
    } else {
      j["region"] = nullptr;
      j["donor_id"] = nullptr;
    }
    out_manifest += j.dump() + "\n";
  }
  write_file_atomic(out_dir / "augment_manifest.jsonl", out_manifest);
  out << train.size() << " training samples processed, " << applied << " swapped\n";
  return kExitOk;
}

AttributeSet attributes_for_group(const std::string& partition, const std::string& group) {
  AttributeSet a;
  if (partition == "gender") {
    a.gender = group == "male" ? Gender::kMale : Gender::kFemale;
  } else if (partition == "occlusion") {
    const bool occluded = group == "occlusion";
    a.beard = occluded;
    a.eyeglasses = false;
    a.bangs = false;
  } else {
    a.set(*parse_attribute(partition), group == partition);
  }
  return a;
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  const GroupPartition partition = standard_partition(o.partition);
  GroupScoreSpec spec;
  spec.partition = partition.name();
  for (std::size_t g = 0; g < partition.size(); ++g) {
    GroupScoreParams p;
    p.group = partition.groups()[g];
    p.bonafide_mean = o.bonafide_mean;
    p.attack_mean = o.attack_mean - (g == 1 ? o.shift * o.std : 0.0);
    p.bonafide_std = p.attack_std = o.std;
    p.n_bonafide = p.n_attack = o.n;
    spec.groups.push_back(p);
  }
  const ScoreSet scores = synth_scores(spec, o.seed);
  write_file_atomic(o.out, serialize_scores(scores));

  if (!o.manifest_out.empty()) {
    SampleManifest manifest;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& r = scores.records()[i];
      SampleRecord rec;
      rec.sample_id = r.sample_id;
      rec.subject_id = r.sample_id;
      rec.pad_label = r.pad_label;
      rec.split = Split::kTest;
      rec.attributes = attributes_for_group(partition.name(), scores.group_of(i));
      manifest.records.push_back(std::move(rec));
    }
    write_file_atomic(o.manifest_out, serialize_manifest(manifest));
  }
  out << scores.size() << " scores written\n";
  return kExitOk;
}

void report_error(std::ostream& err, bool as_json, std::string_view code, const std::string& message, int exit_code) {
  if (as_json) {
    nlohmann::ordered_json j{{"error", code}, {"message", message}, {"exit_code", exit_code}};
    err << j.dump() << "\n";
  } else {
    err << "padfair: " << message << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"padfair: PAD error rates, fairness metrics and FairSWAP augmentation"};
  app.require_subcommand(1);
  bool error_json = false;
  app.add_flag("--error-json", error_json, "print errors as JSON on stderr");

  CommonOptions evaluate_opts, sweep_opts, odta_opts;
  auto* evaluate = app.add_subcommand("evaluate", "EER table, FDR/ABF curves, alpha profile and ODTA report");
  add_evaluation_options(evaluate, evaluate_opts, false);
  evaluate->add_flag("--svg", evaluate_opts.svg, "also write SVG line charts");

  auto* sweep = app.add_subcommand("sweep", "FDR and ABF curves over the APCER grid");
  add_evaluation_options(sweep, sweep_opts, true);
  sweep->add_flag("--svg", sweep_opts.svg, "also write SVG line charts");

  auto* odta = app.add_subcommand("odta", "1-BPCER at fixed APCER with per-group thresholds");
  add_evaluation_options(odta, odta_opts, true);

  SplitOptions split_opts;
  auto* split = app.add_subcommand("split", "materialise a train/test plan for a protocol");
  split->add_option("--manifest", split_opts.manifest)->required();
  split->add_option("--protocol", split_opts.protocol, "P1.1..P2.3 or P3:<attribute>")->required();
  split->add_option("--target-ratio", split_opts.target_ratio, "bona fide : attack target");
  split->add_option("--tolerance", split_opts.tolerance);
  split->add_option("--resplit-fraction", split_opts.resplit_fraction,
                    "reassign subjects to train/test with this train fraction first");
  split->add_option("--out", split_opts.out, "plan JSON path")->required();
  add_seed(split, split_opts.seed);

  AugmentOptions augment_opts;
  auto* augment = app.add_subcommand("augment", "apply FairSWAP to every training sample");
  augment->add_option("--manifest", augment_opts.manifest)->required();
  augment->add_option("--image-root", augment_opts.image_root, "directory media_path is relative to");
  augment->add_option("--map-root", augment_opts.map_root, "directory of <sample_id>.csv pixel maps");
  augment->add_option("--out", augment_opts.out, "output directory")->required();
  augment->add_option("--partition", augment_opts.partition, "groups used for cross-group swapping");
  augment->add_option("--map-format", augment_opts.map_format, "csv or png");
  augment->add_option("--p1", augment_opts.params.p1)->check(CLI::Range(0.0, 1.0));
  augment->add_option("--p2", augment_opts.params.p2)->check(CLI::Range(0.0, 1.0));
  augment->add_option("--p3", augment_opts.params.p3)->check(CLI::Range(0.0, 1.0));
  augment->add_option("--p4", augment_opts.params.p4)->check(CLI::Range(0.0, 1.0));
  augment->add_option("--patch-size", augment_opts.params.patch_size);
  augment->add_option("--alt-patch-size", augment_opts.params.alt_patch_size);
  augment->add_option("--map-resolution", augment_opts.params.map_resolution);
  augment->add_flag("--no-cross-group", augment_opts.no_cross_group, "draw donors from any group");
  add_seed(augment, augment_opts.params.seed);

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "write Gaussian synthetic scores for a two-group system");
  synth->add_option("--out", synth_opts.out, "score CSV path")->required();
  synth->add_option("--manifest-out", synth_opts.manifest_out, "also write a matching manifest");
  synth->add_option("--partition", synth_opts.partition);
  synth->add_option("--n", synth_opts.n, "samples per class per group");
  synth->add_option("--bonafide-mean", synth_opts.bonafide_mean);
  synth->add_option("--attack-mean", synth_opts.attack_mean);
  synth->add_option("--std", synth_opts.std);
  synth->add_option("--shift", synth_opts.shift, "second group's attack mean moves down by shift * std");
  add_seed(synth, synth_opts.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, error_json, "usage", e.what(), kExitIo);
    return kExitIo;
  }

  try {
    if (*evaluate) return cmd_evaluate(evaluate_opts, out);
    if (*sweep) return cmd_sweep(sweep_opts, out);
    if (*odta) return cmd_odta(odta_opts, out);
    if (*split) return cmd_split(split_opts, out);
    if (*augment) return cmd_augment(augment_opts, out);
    if (*synth) return cmd_synth(synth_opts, out);
  } catch (const Error& e) {
    const int code = is_computational(e.code()) ? kExitDegenerate : kExitIo;
    report_error(err, error_json, error_code_name(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(err, error_json, "io", e.what(), kExitIo);
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace padfair
