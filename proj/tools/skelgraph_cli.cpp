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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skelgraph/skelgraph.hpp"
#include "skelgraph/text.hpp"

namespace fs = std::filesystem;
using namespace skelgraph;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int threads = 0;
  int epochs = -1;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_epochs) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--set", o.overrides, "override one config key (key=value)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads; 1 is fully deterministic");
  if (with_epochs) cmd->add_option("--epochs", o.epochs, "epoch budget for this command");
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig resolve(const CommonOptions& o, CLI::App* cmd) {
  RunConfig c;
  if (!o.config_path.empty()) c.apply_text(text::read_file(o.config_path));
  for (const std::string& kv : o.overrides) c.apply_text(kv);
  if (cmd->count("--seed")) c.seed = o.seed;
  if (cmd->count("--threads")) c.threads = o.threads;
  c.validate();
  return c;
}

std::string output_dir(const CommonOptions& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  require(!ec, ErrorCode::IO, "cannot create " + o.out + ": " + ec.message());
  return o.out;
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

struct PreparedData {
  DatasetSplit raw;
  std::vector<SkeletonSequence> train;
  std::vector<SkeletonSequence> test;
};

PreparedData prepare(const RunConfig& c, const std::string& data_override) {
  const std::string manifest = data_override.empty() ? c.data : data_override;
  require(!manifest.empty(), ErrorCode::InvalidConfig, "no dataset given (set data=<manifest> or --data)");
  PreparedData p;
  p.raw = load_dataset(manifest);
  require(p.raw.layout == c.layout, ErrorCode::LayoutMismatch,
          "dataset layout " + p.raw.layout + " differs from configured layout " + c.layout);
  const int reference = bundled_layout(c.layout).reference_joint;
  p.train = preprocess(p.raw.train, c.trim, reference, c.frames);
  if (!p.raw.test.empty()) p.test = preprocess(p.raw.test, c.trim, reference, c.frames);
  return p;
}

std::map<std::string, std::string> checkpoint_metadata(const RunConfig& c, const ModelConfig& m,
                                                       const std::string& stage) {
  std::map<std::string, std::string> meta = m.to_metadata();
  for (const std::string& key : RunConfig::keys())
    if (key != "data") meta["run." + key] = c.get(key);
  meta["stage"] = stage;
  return meta;
}

Model load_model(const std::string& path, Checkpoint* out = nullptr) {
  Checkpoint ckpt = load_checkpoint(path);
  const ModelConfig m = ModelConfig::from_metadata(ckpt.metadata);
  Model model(m, ckpt.parameters);
  if (out) *out = std::move(ckpt);
  return model;
}

void save_effective_config(const RunConfig& c, const std::string& dir) {
  text::write_file(join(dir, "config.txt"), c.to_text());
}

int cmd_synth(const RunConfig& c, const CommonOptions& o) {
  const std::string dir = output_dir(o);
  const DatasetSplit data = generate_synthetic_gait(c.synth_config(), c.seed);
  RunConfig effective = c;
  effective.data = save_dataset(data, dir);
  save_effective_config(effective, dir);
  std::cout << "manifest=" << effective.data << " train=" << data.train.size() << " test=" << data.test.size()
            << "\n";
  return 0;
}

int cmd_pretrain(RunConfig c, const CommonOptions& o, const std::string& data, const std::string& resume) {
  if (o.epochs >= 0) c.pretrain_epochs = o.epochs;
  const std::string dir = output_dir(o);
  const PreparedData p = prepare(c, data);
  std::optional<AdamState> optimizer;
  Model model = [&] {
    if (resume.empty()) return Model(c.model_config(p.raw.num_classes), c.seed);
    Checkpoint ckpt;
    Model m = load_model(resume, &ckpt);
    optimizer = ckpt.optimizer;
    return m;
  }();
  TrainResult result = pretrain(model, p.train, c.pretrain_config(), optimizer);
  Checkpoint ckpt{checkpoint_metadata(c, model.config(), "pretrain"), model.parameters(), result.optimizer};
  save_checkpoint(ckpt, join(dir, "pretrained.ckpt"));
  text::write_file(join(dir, "pretrain_log.csv"), format_pretrain_log(result.log));
  save_effective_config(c, dir);
  std::cout << "epochs=" << result.log.size() << " steps=" << result.optimizer.step;
  if (!result.log.empty()) std::cout << " ssp_loss=" << text::format_double(result.log.back().loss);
  std::cout << "\n";
  return 0;
}

int cmd_finetune(RunConfig c, const CommonOptions& o, const std::string& data, const std::string& from,
                 bool scratch) {
  if (o.epochs >= 0) c.finetune_epochs = o.epochs;
  const std::string dir = output_dir(o);
  const PreparedData p = prepare(c, data);
  require(scratch || !from.empty(), ErrorCode::InvalidConfig, "finetune needs --checkpoint or --from-scratch");
  Model model = scratch ? Model(c.model_config(p.raw.num_classes), c.seed) : load_model(from);
  TrainResult result = finetune(model, p.train, c.finetune_config());
  Checkpoint ckpt{checkpoint_metadata(c, model.config(), "finetune"), model.parameters(), result.optimizer};
  ckpt.metadata["finetune.milestone_epoch"] = std::to_string(result.milestone_epoch);
  ckpt.metadata["finetune.init"] = scratch ? "scratch" : "pretrained";
  save_checkpoint(ckpt, join(dir, "finetuned.ckpt"));
  text::write_file(join(dir, "finetune_log.csv"), format_finetune_log(result.log));
  save_effective_config(c, dir);
  std::cout << "epochs=" << result.log.size() << " milestone_epoch=" << result.milestone_epoch;
  if (!result.log.empty())
    std::cout << " train_loss=" << text::format_double(result.log.back().loss)
              << " train_rank1=" << text::format_double(result.log.back().train_rank1);
  std::cout << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& c, const CommonOptions& o, const std::string& data, const std::string& from,
                 const std::string& split) {
  require(!from.empty(), ErrorCode::InvalidConfig, "evaluate needs --checkpoint");
  require(split == "train" || split == "test", ErrorCode::InvalidConfig, "split must be train or test");
  const std::string dir = output_dir(o);
  const PreparedData p = prepare(c, data);
  const Model model = load_model(from);
  const std::vector<SkeletonSequence>& probes = split == "train" ? p.train : p.test;
  require(!probes.empty(), ErrorCode::InvalidConfig, "the " + split + " split is empty");
  const Batch batch = make_batch(probes, model.config().frames);
  const EvaluationReport report = evaluate_scores(model.scores(batch), batch.labels);
  text::write_file(join(dir, "report_" + split + ".csv"), format_report(report));
  std::cout << "probes=" << report.probes << " rank1=" << text::format_double(report.rank1)
            << " nauc=" << text::format_double(report.nauc) << "\n";
  return 0;
}

int cmd_export(const CommonOptions& o, const std::string& from, const std::string& sequence_path, int index) {
  require(!from.empty() && !sequence_path.empty(), ErrorCode::InvalidConfig,
          "export-relations needs --checkpoint and --sequence");
  const std::string dir = output_dir(o);
  const Model model = load_model(from);
  const SequenceFile file = parse_sequence_file(text::read_file(sequence_path));
  require(file.layout == model.config().layout, ErrorCode::LayoutMismatch,
          "sequence layout " + file.layout + " differs from the model's " + model.config().layout);
  require(index >= 0 && index < static_cast<int>(file.sequences.size()), ErrorCode::IndexOutOfRange,
          "sequence index " + std::to_string(index) + " outside the file");
  const SkeletonSequence seq = normalize_frames(file.sequences[index], model.layout().reference_joint);

  std::string collab = "frame,pair,i,j,weight\n";
  std::string heads = "frame,level,head,i,j,weight\n";
  std::string nodes = "frame,level,node,x,y,z\n";
  auto put = [](std::string& out, const std::string& prefix, const MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out += prefix + std::to_string(i) + "," + std::to_string(j) + "," + text::format_double(m(i, j)) + "\n";
  };
  for (int t = 0; t < seq.length(); ++t) {
    const GraphEncoding<MatrixXd> enc = model.encode_frame(seq.frames[t]);
    const std::string f = std::to_string(t) + ",";
    put(collab, f + "21,", enc.relations_21);
    put(collab, f + "32,", enc.relations_32);
    for (int l = 0; l < kLevels; ++l) {
      for (std::size_t s = 0; s < enc.msrl[l].adjacency.size(); ++s)
        put(heads, f + std::to_string(l + 1) + "," + std::to_string(s) + ",", enc.msrl[l].adjacency[s]);
      const MatrixXd& pos = enc.inputs[l];
      for (Eigen::Index i = 0; i < pos.rows(); ++i)
        nodes += f + std::to_string(l + 1) + "," + std::to_string(i) + "," + text::format_double(pos(i, 0)) + "," +
                 text::format_double(pos(i, 1)) + "," + text::format_double(pos(i, 2)) + "\n";
    }
  }
  text::write_file(join(dir, "collab_relations.csv"), collab);
  text::write_file(join(dir, "head_relations.csv"), heads);
  text::write_file(join(dir, "node_positions.csv"), nodes);
  std::cout << "frames=" << seq.length() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeleton graph encoder: synthesis, pre-training, fine-tuning, evaluation"};
  app.require_subcommand(1);

  CommonOptions synth_o, pre_o, fine_o, eval_o, export_o;
  std::string pre_data, pre_resume, fine_data, fine_ckpt, eval_data, eval_ckpt, eval_split = "test";
  std::string export_ckpt, export_seq;
  int export_index = 0;
  bool scratch = false;

  auto* synth = app.add_subcommand("synth", "write a synthetic gait dataset");
  add_common(synth, synth_o, false);

  auto* pre = app.add_subcommand("pretrain", "self-supervised skeleton prediction training");
  add_common(pre, pre_o, true);
  pre->add_option("--data", pre_data, "dataset manifest");
  pre->add_option("--resume", pre_resume, "continue from a pre-training checkpoint");

  auto* fine = app.add_subcommand("finetune", "identity recognition training");
  add_common(fine, fine_o, true);
  fine->add_option("--data", fine_data, "dataset manifest");
  fine->add_option("--checkpoint", fine_ckpt, "pre-trained checkpoint");
  fine->add_flag("--from-scratch", scratch, "start from a fresh initialization");

  auto* eval = app.add_subcommand("evaluate", "CMC, Rank-1 and nAUC of a checkpoint");
  add_common(eval, eval_o, false);
  eval->add_option("--data", eval_data, "dataset manifest");
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint to evaluate");
  eval->add_option("--split", eval_split, "train or test");

  auto* exp = app.add_subcommand("export-relations", "dump learned relations of one sequence");
  add_common(exp, export_o, false);
  exp->add_option("--checkpoint", export_ckpt, "checkpoint");
  exp->add_option("--sequence", export_seq, "sequence file");
  exp->add_option("--index", export_index, "which sequence of the file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(resolve(synth_o, synth), synth_o);
    if (pre->parsed()) return cmd_pretrain(resolve(pre_o, pre), pre_o, pre_data, pre_resume);
    if (fine->parsed()) return cmd_finetune(resolve(fine_o, fine), fine_o, fine_data, fine_ckpt, scratch);
    if (eval->parsed()) return cmd_evaluate(resolve(eval_o, eval), eval_o, eval_data, eval_ckpt, eval_split);
    if (exp->parsed()) {
      resolve(export_o, exp);
      return cmd_export(export_o, export_ckpt, export_seq, export_index);
    }
  } catch (const Error& e) {
    std::cerr << "error: code=" << error_code_name(e.code()) << " message=" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: code=Internal message=" << e.what() << "\n";
    return 3;
  }
  return 1;
}
