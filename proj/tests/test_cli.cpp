/*
 * Copyright 2026 The skelgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "skelgraph/text.hpp"
#include "test_support.hpp"

using namespace skelgraph;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SKELGRAPH_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) { return text::read_file(p.string()); }

/// A scratch directory that is removed at scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("skelgraph_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

const std::string kTiny =
    "--set layout=tiny6 --set frames=4 --set feature_dim=4 --set heads=2 --set hidden=8 "
    "--set predictor_hidden=8 --set classifier_hidden=8 --set batch_size=8 --set chunk_size=4 ";

std::string synth(const Scratch& s, const std::string& name, int identities, int per = 4, int seed = 3) {
  const Run r = run("synth " + kTiny + "--set identities=" + std::to_string(identities) +
                    " --set sequences_per_identity=" + std::to_string(per) +
                    " --set test_sequences_per_identity=2 --seed " + std::to_string(seed) + " --out " + (s / name));
  INFO(r.output);
  REQUIRE(r.status == 0);
  return s / (name + "/config.txt");
}

}  // namespace

TEST_CASE("synth writes a manifest with one entry per sequence") {
  Scratch s("synth");
  const Run r = run("synth --seed 4 --out " + (s / "d"));
  REQUIRE(r.status == 0);
  CHECK(r.output.find("train=100 test=25") != std::string::npos);
  const DatasetSplit d = load_dataset(s / "d/manifest.csv");
  CHECK(d.train.size() == 100);
  CHECK(d.num_classes == 5);
  REQUIRE(run("synth --seed 4 --out " + (s / "e")).status == 0);
  CHECK(slurp(s.dir / "d/seq_00007.csv") == slurp(s.dir / "e/seq_00007.csv"));
}

TEST_CASE("invalid configuration is reported by code") {
  Scratch s("invalid");
  Run r = run("synth --set identities=0 --out " + (s / "d"));
  CHECK(r.status == 2);
  CHECK(r.output.find("error: code=InvalidConfig") != std::string::npos);
  r = run("synth --set frames=5 --out " + (s / "d"));
  CHECK(r.status == 2);
  r = run("synth --set no_such_key=1 --out " + (s / "d"));
  CHECK(r.status == 2);
  r = run("evaluate --out " + (s / "d"));
  CHECK(r.status == 2);
}

TEST_CASE("zero epochs keep the initialization") {
  Scratch s("zero");
  const std::string config = synth(s, "d", 3);
  const Run r = run("finetune --config " + config + " --from-scratch --epochs 0 --seed 17 --out " + (s / "f"));
  INFO(r.output);
  REQUIRE(r.status == 0);
  const Checkpoint ck = load_checkpoint(s / "f/finetuned.ckpt");
  const Model init(ModelConfig::from_metadata(ck.metadata), 17);
  REQUIRE(ck.parameters.size() == init.parameters().size());
  for (std::size_t k = 0; k < ck.parameters.size(); ++k) CHECK(ck.parameters[k].value == init.parameters()[k].value);
  CHECK(ck.metadata.at("finetune.init") == "scratch");
}

TEST_CASE("pipeline runs and reruns identically") {
  Scratch s("pipeline");
  const std::string config = synth(s, "d", 3);
  for (const char* out : {"a", "b"}) {
    const std::string dir = s / out;
    REQUIRE(run("pretrain --config " + config + " --epochs 3 --out " + dir + "/pre").status == 0);
    REQUIRE(run("finetune --config " + config + " --epochs 4 --checkpoint " + dir + "/pre/pretrained.ckpt --out " +
                dir + "/fine")
                .status == 0);
    const Run e = run("evaluate --config " + config + " --checkpoint " + dir + "/fine/finetuned.ckpt --out " + dir);
    INFO(e.output);
    REQUIRE(e.status == 0);
  }
  for (const char* file : {"pre/pretrained.ckpt", "fine/finetuned.ckpt", "report_test.csv", "fine/finetune_log.csv"})
    CHECK(slurp(s.dir / "a" / file) == slurp(s.dir / "b" / file));

  std::istringstream report(slurp(s.dir / "a/report_test.csv"));
  std::string header, row;
  std::getline(report, header);
  std::getline(report, row);
  const auto fields = text::split(row, ',');
  REQUIRE(fields.size() == 4);
  CHECK(fields[0] == "6");
  CHECK(text::to_double(fields[2], "rank1") <= text::to_double(fields[3], "nauc"));

  // The saved effective configuration drives an identical run.
  REQUIRE(run("pretrain --config " + (s / "a/pre/config.txt") + " --data " + (s / "d/manifest.csv") +
              " --epochs 3 --out " + (s / "c"))
              .status == 0);
  CHECK(slurp(s.dir / "c/pretrained.ckpt") == slurp(s.dir / "a/pre/pretrained.ckpt"));
}

TEST_CASE("resumed pre-training continues the step counter") {
  Scratch s("resume");
  const std::string config = synth(s, "d", 2);
  REQUIRE(run("pretrain --config " + config + " --epochs 2 --out " + (s / "p1")).status == 0);
  const Run r = run("pretrain --config " + config + " --epochs 2 --resume " + (s / "p1/pretrained.ckpt") +
                    " --out " + (s / "p2"));
  INFO(r.output);
  REQUIRE(r.status == 0);
  CHECK(r.output.find("steps=4") != std::string::npos);
}

TEST_CASE("fine-tuning on more identities than the checkpoint knows fails") {
  Scratch s("labels");
  const std::string three = synth(s, "three", 3);
  const std::string five = synth(s, "five", 5);
  REQUIRE(run("pretrain --config " + three + " --epochs 1 --out " + (s / "p")).status == 0);
  const Run r = run("finetune --config " + five + " --epochs 1 --checkpoint " + (s / "p/pretrained.ckpt") +
                    " --out " + (s / "f"));
  CHECK(r.status == 2);
  CHECK(r.output.find("code=InvalidLabel") != std::string::npos);
}

TEST_CASE("relation export writes normalized rows") {
  Scratch s("export");
  const std::string config = synth(s, "d", 2);
  REQUIRE(run("pretrain --config " + config + " --epochs 1 --out " + (s / "p")).status == 0);
  const Run r = run("export-relations --checkpoint " + (s / "p/pretrained.ckpt") + " --sequence " +
                    (s / "d/seq_00001.csv") + " --out " + (s / "x"));
  INFO(r.output);
  REQUIRE(r.status == 0);
  std::map<std::string, double> sums;
  int rows = 0;
  for (const auto& row : text::csv_rows(slurp(s.dir / "x/head_relations.csv"))) {
    if (row[0] == "frame") continue;
    sums[row[0] + "/" + row[1] + "/" + row[2] + "/" + row[3]] += text::to_double(row[5], "weight");
    ++rows;
  }
  CHECK(rows == 4 * 2 * (36 + 9 + 4));
  for (const auto& [key, total] : sums) CHECK(std::abs(total - 1) < 1e-6);
  sums.clear();
  for (const auto& row : text::csv_rows(slurp(s.dir / "x/collab_relations.csv"))) {
    if (row[0] == "frame") continue;
    sums[row[0] + "/" + row[1] + "/" + row[2]] += text::to_double(row[4], "weight");
  }
  CHECK(sums.size() == 4 * (3 + 2));
  for (const auto& [key, total] : sums) CHECK(std::abs(total - 1) < 1e-6);
  CHECK(text::csv_rows(slurp(s.dir / "x/node_positions.csv")).size() == 1 + 4 * (6 + 3 + 2));
  CHECK(run("export-relations --checkpoint " + (s / "p/pretrained.ckpt") + " --sequence " +
            (s / "d/seq_00001.csv") + " --index 9 --out " + (s / "x"))
            .status == 2);
}
