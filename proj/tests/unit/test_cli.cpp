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

#include <filesystem>
#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "padfair/cli.hpp"
#include "padfair/data_model.hpp"
#include "padfair/fairswap.hpp"
#include "padfair/io.hpp"
#include "padfair/protocol.hpp"
#include "padfair/report.hpp"

namespace padfair {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "padfair");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("padfair_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string tree_bytes(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, root).string() + "\n" + read_text_file(f);
  return all;
}

TEST(Cli, SynthThenEvaluateFairSystem) {
  const auto dir = temp_dir("fair");
  auto r = run({"synth", "--out", (dir / "scores.csv").string(), "--manifest-out", (dir / "m.jsonl").string(), "--n",
                "10000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"evaluate", "--manifest", (dir / "m.jsonl").string(), "--scores", (dir / "scores.csv").string(), "--out",
           (dir / "out").string(), "--svg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(read_text_file(dir / "out" / "report.json"));
  EXPECT_GE(report["fdr"]["auc"].get<double>(), 0.97);
  EXPECT_EQ(report["eer"].size(), 3u);
  for (const char* f : {"fdr_curve.csv", "abf_curve.csv", "odta.csv", "alpha_profile.csv", "fdr_curve.svg"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
}

TEST(Cli, HandFixtureFdrPoint) {
  // At tau = 0.8: APCER {male 0.2, female 0.1}, BPCER {male 0.05, female 0.15}.
  // x = 0.15 over 20 pooled attacks picks the 4th smallest, which is 0.8.
  const auto dir = temp_dir("hand");
  SampleManifest m;
  std::string csv = "sample_id,score\n";
  auto add = [&](const std::string& g, int n_attack, int low, int n_bf, int high) {
    for (int i = 0; i < n_attack + n_bf; ++i) {
      SampleRecord r;
      r.sample_id = g + std::to_string(i);
      r.subject_id = r.sample_id;
      r.pad_label = i < n_attack ? PadLabel::kAttack : PadLabel::kBonaFide;
      r.split = Split::kTest;
      r.attributes.gender = g == "m" ? Gender::kMale : Gender::kFemale;
      m.records.push_back(r);
      const double score = i < n_attack ? (i < low ? 0.2 : 0.8) : (i - n_attack < high ? 0.9 : 0.1);
      csv += r.sample_id + "," + format_double(score) + "\n";
    }
  };
  add("m", 10, 2, 20, 1);
  add("f", 10, 1, 20, 3);
  write_file_atomic(dir / "m.jsonl", serialize_manifest(m));
  write_file_atomic(dir / "s.csv", csv);
  const auto r = run({"sweep", "--manifest", (dir / "m.jsonl").string(), "--scores", (dir / "s.csv").string(), "--out",
                      (dir / "out").string(), "--grid-start", "0.15", "--grid-end", "0.15"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_curve_csv(read_text_file(dir / "out" / "fdr_curve.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(*rows[0].tau, 0.8);
  EXPECT_EQ(*rows[0].value, 0.9);
}

TEST(Cli, MissingScoreFileIsExitTwo) {
  const auto dir = temp_dir("missing");
  const auto path = (dir / "nope.csv").string();
  const auto r = run({"evaluate", "--scores", path, "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(path), std::string::npos) << r.err;
}

TEST(Cli, DegenerateGroupIsExitOneWithJsonError) {
  const auto dir = temp_dir("degenerate");
  SampleManifest m;
  std::string csv = "sample_id,score\n";
  for (int i = 0; i < 6; ++i) {
    SampleRecord r;
    r.sample_id = "s" + std::to_string(i);
    r.subject_id = r.sample_id;
    r.pad_label = i < 2 || i == 4 ? PadLabel::kAttack : PadLabel::kBonaFide;
    r.split = Split::kTest;
    r.attributes.gender = i < 4 ? Gender::kMale : Gender::kFemale;  // female: one attack, one bona fide
    if (i == 5) r.pad_label = PadLabel::kAttack;                     // female: attacks only
    m.records.push_back(r);
    csv += r.sample_id + "," + std::to_string(i) + "\n";
  }
  write_file_atomic(dir / "m.jsonl", serialize_manifest(m));
  write_file_atomic(dir / "s.csv", csv);
  const auto r = run({"--error-json", "evaluate", "--manifest", (dir / "m.jsonl").string(), "--scores",
                      (dir / "s.csv").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "undefined-rate");
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_NE(j["message"].get<std::string>().find("female"), std::string::npos);
}

TEST(Cli, BadFlagsAreExitTwo) {
  EXPECT_EQ(run({"evaluate"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"synth", "--out", "/tmp/x.csv", "--partition", "hats"}).code, 2);
}

TEST(Cli, SplitWritesPlan) {
  const auto dir = temp_dir("split");
  SampleManifest m;
  for (int i = 0; i < 40; ++i) {
    SampleRecord r;
    r.sample_id = "r" + std::to_string(i);
    r.subject_id = "s" + std::to_string(i / 2);
    r.pad_label = i % 2 ? PadLabel::kAttack : PadLabel::kBonaFide;
    r.split = i < 32 ? Split::kTrain : Split::kTest;
    r.attributes.gender = (i / 2) % 2 ? Gender::kFemale : Gender::kMale;
    m.records.push_back(r);
  }
  write_file_atomic(dir / "m.jsonl", serialize_manifest(m));
  const auto r = run({"split", "--manifest", (dir / "m.jsonl").string(), "--protocol", "P1.3", "--out",
                      (dir / "plan.json").string(), "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto plan = parse_plan(read_text_file(dir / "plan.json"));
  EXPECT_EQ(plan.protocol, "P1.3");
  for (const auto& id : plan.train_ids) {
    EXPECT_EQ(m.find(id)->attributes.gender, Gender::kMale);
  }
}

TEST(Cli, AugmentDisabledAndDeterministic) {
  const auto dir = temp_dir("augment");
  SampleManifest m;
  for (int i = 0; i < 6; ++i) {
    SampleRecord r;
    r.sample_id = "a" + std::to_string(i);
    r.subject_id = r.sample_id;
    r.media_path = "img/" + r.sample_id + ".png";
    r.pad_label = i % 2 ? PadLabel::kAttack : PadLabel::kBonaFide;
    r.split = Split::kTrain;
    r.attributes.gender = i < 3 ? Gender::kMale : Gender::kFemale;
    m.records.push_back(r);
    save_png(dir / "in" / *r.media_path,
             RasterImage::filled(112, 112, static_cast<std::uint8_t>(40 * i), 10, static_cast<std::uint8_t>(200 - i)));
  }
  write_file_atomic(dir / "in" / "m.jsonl", serialize_manifest(m));
  const auto manifest = (dir / "in" / "m.jsonl").string();
  const auto root = (dir / "in").string();

  auto r = run({"augment", "--manifest", manifest, "--image-root", root, "--out", (dir / "off").string(), "--p1", "0",
                "--p2", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& rec : m.records) {
    EXPECT_EQ(load_png(dir / "off" / "images" / (rec.sample_id + ".png")), load_png(dir / "in" / *rec.media_path));
  }

  const std::vector<std::string> on{"augment", "--manifest", manifest, "--image-root", root, "--p1", "1",
                                    "--p2", "1", "--patch-size", "28", "--alt-patch-size", "56", "--seed", "5"};
  auto a = on, b = on;
  a.insert(a.end(), {"--out", (dir / "a").string()});
  b.insert(b.end(), {"--out", (dir / "b").string()});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(tree_bytes(dir / "a"), tree_bytes(dir / "b"));

  // Binary labels in the output manifest equal the input labels.
  std::istringstream lines(read_text_file(dir / "a" / "augment_manifest.jsonl"));
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["applied"].get<bool>());
    EXPECT_EQ(j["pad_label"], std::string(to_string(m.find(j["sample_id"].get<std::string>())->pad_label)));
  }
}

}  // namespace
}  // namespace padfair
