// Copyright 2026 The vecforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "vecforge/checkpoint.h"
#include "vecforge/error.h"
#include "vecforge/eval_metrics.h"
#include "vecforge/format.h"
#include "vecforge/lora.h"
#include "vecforge/manifest.h"
#include "vecforge/records_io.h"
#include "vecforge/sweep.h"
#include "vecforge/toy_lab.h"
#include "vecforge/vector_engine.h"

namespace vecforge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kGradCheckTolerance = 1e-5;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void Warn(const Streams& io, const std::string& msg) { fmt::print(io.err, "warning: {}\n", msg); }

void WarnIfExtrapolating(const Streams& io, double alpha) {
  if (alpha < 0.0 || alpha > 2.0) {
    Warn(io, fmt::format("alpha {} is outside [0, 2] (extrapolation)", FormatDouble(alpha)));
  }
}

bool LooksLikeAdapter(const Checkpoint& ckpt) {
  if (!ckpt.metadata.contains("rank") || ckpt.tensors.empty()) return false;
  return ckpt.tensors.begin()->first.ends_with(kLoraASuffix) ||
         ckpt.tensors.begin()->first.ends_with(kLoraBSuffix);
}

// A task-vector file, or a LoRA adapter expanded on the fly.
TaskVector LoadVector(const fs::path& path, const std::string& base_fingerprint = {}) {
  Checkpoint ckpt = ReadCheckpoint(path);
  if (LooksLikeAdapter(ckpt)) {
    LoraAdapter adapter = AdapterFromCheckpoint(ckpt);
    std::string fp = base_fingerprint;
    if (fp.empty()) {
      auto it = adapter.metadata.find("base_fingerprint");
      if (it != adapter.metadata.end()) fp = it->second;
    }
    TaskVector v = LoraDelta(adapter, fp);
    v.provenance.vector_id = path.stem().string();
    return v;
  }
  TaskVector v = TaskVectorFromCheckpoint(ckpt);
  if (v.provenance.vector_id.empty()) v.provenance.vector_id = path.stem().string();
  return v;
}

MergeOptions MakeMergeOptions(const Streams& io, bool force) {
  MergeOptions options;
  options.force = force;
  options.warn = [&io](const std::string& msg) { Warn(io, msg); };
  return options;
}

TensorStats VectorStats(const TaskVector& v) {
  double sq = 0.0, max_abs = 0.0, sum = 0.0;
  std::size_t n = 0, zeros = 0;
  for (const auto& [name, t] : v.deltas) {
    const TensorStats s = ComputeStats(t);
    sq += s.l2_norm * s.l2_norm;
    max_abs = std::max(max_abs, s.max_abs);
    sum += s.mean * static_cast<double>(t.size());
    zeros += static_cast<std::size_t>(std::llround(s.fraction_zero * static_cast<double>(t.size())));
    n += t.size();
  }
  TensorStats total;
  total.l2_norm = std::sqrt(sq);
  total.max_abs = max_abs;
  total.mean = n == 0 ? 0.0 : sum / static_cast<double>(n);
  total.fraction_zero = n == 0 ? 1.0 : static_cast<double>(zeros) / static_cast<double>(n);
  return total;
}

void PrintTensorTable(const Streams& io, const std::map<std::string, Tensor>& tensors) {
  fmt::print(io.out, "{:<32} {:<14} {:<5} {:>14} {:>14} {:>14} {:>10}\n", "name", "shape",
             "dtype", "l2_norm", "max_abs", "mean", "zero_frac");
  for (const auto& [name, t] : tensors) {
    const TensorStats s = ComputeStats(t);
    fmt::print(io.out, "{:<32} {:<14} {:<5} {:>14.6g} {:>14.6g} {:>14.6g} {:>10.4f}\n", name,
               ShapeString(t.shape()), DTypeName(t.dtype()), s.l2_norm, s.max_abs, s.mean,
               s.fraction_zero);
  }
}

fs::path JsonSibling(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string pretrained, finetuned, out, id;
};

int RunExtract(const ExtractArgs& a, const Streams& io) {
  const Checkpoint pre = ReadCheckpoint(a.pretrained);
  const Checkpoint ft = ReadCheckpoint(a.finetuned);
  TaskVector v = ExtractVector(ft, pre);
  v.provenance.vector_id = a.id.empty() ? fs::path(a.out).stem().string() : a.id;
  WriteTaskVector(v, a.out);
  const TensorStats s = VectorStats(v);
  fmt::print(io.out, "wrote {} ({} tensors, l2_norm {}, base {})\n", a.out, v.deltas.size(),
             FormatDouble(s.l2_norm), v.provenance.base_fingerprint);
  return kExitOk;
}

struct MergeArgs {
  std::string base, out, manifest;
  std::vector<std::string> vectors;
  std::vector<double> alphas;
  bool force = false;
};

int RunMerge(const MergeArgs& a, const Streams& io) {
  if (a.vectors.size() != a.alphas.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} --vector values but {} --alpha values", a.vectors.size(),
                            a.alphas.size()));
  }
  std::optional<VectorManifest> manifest;
  if (!a.manifest.empty()) manifest = VectorManifest::Load(a.manifest);

  std::vector<TaskVector> vectors;
  for (const std::string& spec : a.vectors) {
    const ManifestEntry* entry = manifest ? manifest->Find(spec) : nullptr;
    if (entry != nullptr) {
      TaskVector v = LoadVector(manifest->Resolve(*entry), entry->base_fingerprint);
      v.provenance.vector_id = entry->vector_id;
      vectors.push_back(std::move(v));
    } else {
      vectors.push_back(LoadVector(spec));
    }
  }
  for (double alpha : a.alphas) WarnIfExtrapolating(io, alpha);

  const Checkpoint base = ReadCheckpoint(a.base);
  const MergeOptions options = MakeMergeOptions(io, a.force);
  const Checkpoint merged =
      vectors.size() == 1 ? Apply(base, vectors.front(), a.alphas.front(), options)
                          : Apply(base, Compose(vectors, a.alphas, options), 1.0, options);
  WriteCheckpoint(merged, a.out);
  fmt::print(io.out, "wrote {} (fingerprint {})\n", a.out, Fingerprint(merged));
  return kExitOk;
}

struct LoraExpandArgs {
  std::string adapter, out, base, id;
};

int RunLoraExpand(const LoraExpandArgs& a, const Streams& io) {
  const LoraAdapter adapter = ReadLora(a.adapter);
  std::string fp;
  if (!a.base.empty()) {
    fp = Fingerprint(ReadCheckpoint(a.base));
  } else if (auto it = adapter.metadata.find("base_fingerprint"); it != adapter.metadata.end()) {
    fp = it->second;
  }
  if (fp.empty()) Warn(io, "no base fingerprint known; applying this vector will need --force");
  TaskVector v = LoraDelta(adapter, fp);
  v.provenance.vector_id = a.id.empty() ? fs::path(a.out).stem().string() : a.id;
  WriteTaskVector(v, a.out);
  fmt::print(io.out, "wrote {} ({} layers, rank {}, scaling {}, l2_norm {})\n", a.out,
             v.deltas.size(), adapter.rank, FormatDouble(adapter.scaling()),
             FormatDouble(VectorStats(v).l2_norm));
  return kExitOk;
}

struct SweepArgs {
  std::string base, vector, vector2, grid = "0:1:0.2", task, task2, out, scores;
  bool json = false;
  bool force = false;
  std::size_t samples = 1024;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

int RunSweep(const SweepArgs& a, const Streams& io) {
  const std::vector<double> grid = ParseGrid(a.grid);
  const ToyModel base = ToyModel::FromCheckpoint(ReadCheckpoint(a.base));
  const TaskVector first = LoadVector(a.vector);
  std::optional<TaskVector> second;
  if (!a.vector2.empty()) second = LoadVector(a.vector2);

  std::vector<SyntheticTask> tasks{SyntheticTask::FromPreset(a.task, base.input_dim(), a.seed)};
  if (!a.task2.empty()) tasks.push_back(SyntheticTask::FromPreset(a.task2, base.input_dim(), a.seed));

  for (double alpha : grid) WarnIfExtrapolating(io, alpha);

  SweepOptions options;
  options.samples = a.samples;
  options.threads = a.threads;
  options.merge = MakeMergeOptions(io, a.force);
  options.grid_spec = a.grid;
  if (!a.scores.empty()) options.external_scores = LoadScoreTable(a.scores);

  const SweepResult result = vecforge::RunSweep(base, first, second ? &*second : nullptr, grid,
                                                tasks, options);
  WriteFileBytes(a.out, SweepToCsv(result));
  if (a.json) WriteFileBytes(JsonSibling(a.out), SweepToJson(result));
  fmt::print(io.out, "wrote {} ({} rows)\n", a.out, result.rows.size());
  return kExitOk;
}

struct ToyArgs {
  // init
  std::size_t width = 16;
  std::size_t depth = 2;
  std::string init = "random";
  // shared
  std::string base, out, task = "rotate:30", adapter;
  std::uint64_t seed = 0;
  std::size_t samples = 1024;
  double adapter_scale = 1.0;
  TrainConfig cfg;
};

std::vector<LayerSpec> StackedLayers(std::size_t width, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::kConfigError, "--depth must be positive");
  std::vector<LayerSpec> layers(depth, LayerSpec{width, width, Activation::kTanh});
  layers.back().activation = Activation::kIdentity;
  return layers;
}

int RunToyInit(const ToyArgs& a, const Streams& io) {
  ModelInit init;
  if (a.init == "random") {
    init = ModelInit::kRandom;
  } else if (a.init == "identity") {
    init = ModelInit::kIdentity;
  } else {
    throw Error(ErrorCode::kConfigError, fmt::format("unknown --init '{}'", a.init));
  }
  const ToyModel model = ToyModel::Create(StackedLayers(a.width, a.depth), init, a.seed);
  WriteCheckpoint(model.ToCheckpoint(), a.out);
  fmt::print(io.out, "wrote {} (fingerprint {})\n", a.out, Fingerprint(model.weights()));
  return kExitOk;
}

int RunToyTrain(const ToyArgs& a, const Streams& io) {
  const ToyModel model = ToyModel::FromCheckpoint(ReadCheckpoint(a.base));
  const SyntheticTask task = SyntheticTask::FromPreset(a.task, model.input_dim(), a.seed);
  TrainConfig cfg = a.cfg;
  cfg.seed = a.seed;
  TrainLog log;
  const LoraAdapter adapter = TrainLora(model, task, cfg, &log);
  WriteLora(adapter, a.out);
  fmt::print(io.out, "trained {} steps on {}: loss {} -> {}\n", cfg.steps, task.id(),
             FormatDouble(log.losses.empty() ? 0.0 : log.losses.front()),
             FormatDouble(log.losses.empty() ? 0.0 : log.losses.back()));
  fmt::print(io.out, "wrote {} (adapter fingerprint {}, {} parameters)\n", a.out,
             Fingerprint(AdapterToCheckpoint(adapter)), adapter.ParameterCount());
  return kExitOk;
}

int RunToyEval(const ToyArgs& a, const Streams& io) {
  const ToyModel model = ToyModel::FromCheckpoint(ReadCheckpoint(a.base));
  const SyntheticTask task = SyntheticTask::FromPreset(a.task, model.input_dim(), a.seed);
  std::optional<LoraAdapter> adapter;
  if (!a.adapter.empty()) adapter = ReadLora(a.adapter);
  const double mse =
      Evaluate(model, task, a.samples, adapter ? &*adapter : nullptr, a.adapter_scale);
  fmt::print(io.out, "mse {}\n", FormatDouble(mse));
  return kExitOk;
}

int RunToyGradcheck(const ToyArgs& a, const Streams& io) {
  const GradientCheckSetup setup = ReferenceGradientCheckSetup(a.seed);
  const double error = GradientCheck(setup.model, setup.adapter, setup.task);
  fmt::print(io.out, "max relative gradient error {} ({} adapted parameters)\n",
             FormatDouble(error), setup.adapter.ParameterCount());
  if (!(error < kGradCheckTolerance)) {
    fmt::print(io.err, "gradient check failed: {} >= {}\n", FormatDouble(error),
               FormatDouble(kGradCheckTolerance));
    return kExitValidation;
  }
  return kExitOk;
}

struct EvalArgs {
  std::string records, text_mode = "basic_en", sample, reference, synth, table;
};

ordered_json RejectionsJson(const std::vector<RejectedRecord>& rejected) {
  ordered_json out = ordered_json::array();
  for (const RejectedRecord& r : rejected) {
    std::vector<std::string> rules;
    for (FilterRule rule : r.rules) rules.emplace_back(FilterRuleName(rule));
    out.push_back({{"id", r.record.id}, {"rules", rules}});
  }
  return out;
}

int RunEvalRates(const EvalArgs& a, const Streams& io, bool word_level) {
  const auto records = LoadEvalRecords(a.records);
  FilterConfig config;
  config.mode = ParseTextMode(a.text_mode);
  const CorpusRates rates = CorpusErrorRates(records, config);
  const EditCounts& c = word_level ? rates.words : rates.chars;
  ordered_json doc;
  doc[word_level ? "wer" : "cer"] = word_level ? rates.wer : rates.cer;
  doc["substitutions"] = c.substitutions;
  doc["insertions"] = c.insertions;
  doc["deletions"] = c.deletions;
  doc["reference_length"] = c.reference_length;
  doc["kept"] = rates.kept;
  doc["rejected"] = RejectionsJson(rates.rejected);
  fmt::print(io.out, "{}\n", doc.dump(2));
  return kExitOk;
}

int RunEvalAccentSim(const EvalArgs& a, const Streams& io) {
  const EmbeddingSet samples = LoadEmbeddingSet(a.sample);
  const EmbeddingSet reference = LoadEmbeddingSet(a.reference);
  ordered_json per_sample = ordered_json::object();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.embeddings.size(); ++i) {
    const double sim = AccentSimilarity(samples.embeddings[i], reference);
    per_sample[samples.ids[i]] = sim;
    sum += sim;
  }
  ordered_json doc;
  doc["reference_label"] = reference.label;
  doc["per_sample"] = per_sample;
  doc["mean"] = samples.embeddings.empty() ? 0.0 : sum / static_cast<double>(samples.embeddings.size());
  fmt::print(io.out, "{}\n", doc.dump(2));
  return kExitOk;
}

int RunEvalSpeakerSim(const EvalArgs& a, const Streams& io) {
  const Checkpoint ref = ReadCheckpoint(a.reference);
  const Checkpoint syn = ReadCheckpoint(a.synth);
  ordered_json per_pair = ordered_json::object();
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [name, t] : syn.tensors) {
    auto it = ref.tensors.find(name);
    if (it == ref.tensors.end()) {
      throw Error(ErrorCode::kKeySetMismatch,
                  fmt::format("no reference embedding for '{}'", name));
    }
    const double sim = SpeakerSimilarity(it->second, t);
    per_pair[name] = sim;
    sum += sim;
    ++n;
  }
  ordered_json doc;
  doc["per_utterance"] = per_pair;
  doc["mean"] = n == 0 ? 0.0 : sum / static_cast<double>(n);
  fmt::print(io.out, "{}\n", doc.dump(2));
  return kExitOk;
}

int RunEvalScores(const EvalArgs& a, const Streams& io) {
  ordered_json doc = ordered_json::array();
  for (const ScoreSummary& s : AggregateScores(LoadScoreTable(a.table))) {
    doc.push_back({{"metric", s.metric},
                   {"count", s.count},
                   {"mean", s.mean},
                   {"stddev", s.stddev},
                   {"min", s.min},
                   {"max", s.max}});
  }
  fmt::print(io.out, "{}\n", doc.dump(2));
  return kExitOk;
}

struct InspectArgs {
  std::string checkpoint, vector;
};

int RunInspect(const InspectArgs& a, const Streams& io) {
  if (a.checkpoint.empty() == a.vector.empty()) {
    throw Error(ErrorCode::kConfigError, "pass exactly one of --checkpoint or --vector");
  }
  const Checkpoint ckpt = ReadCheckpoint(a.checkpoint.empty() ? a.vector : a.checkpoint);
  fmt::print(io.out, "fingerprint {}\n", Fingerprint(ckpt));
  fmt::print(io.out, "tensors {}  parameters {}\n", ckpt.tensors.size(), ckpt.ParameterCount());
  if (!a.vector.empty()) {
    const TaskVector v = TaskVectorFromCheckpoint(ckpt);
    const Provenance& p = v.provenance;
    fmt::print(io.out, "kind task_vector\n");
    fmt::print(io.out, "source {}\n", VectorSourceName(p.source));
    fmt::print(io.out, "base_fingerprint {}\n", p.base_fingerprint.empty() ? "<unset>" : p.base_fingerprint);
    if (!p.vector_id.empty()) fmt::print(io.out, "vector_id {}\n", p.vector_id);
    fmt::print(io.out, "scale {}\n", FormatDouble(p.scale));
    for (const auto& [id, c] : p.components) {
      fmt::print(io.out, "component {} {}\n", id, FormatDouble(c));
    }
  } else {
    for (const auto& [k, v] : ckpt.metadata) fmt::print(io.out, "meta {} = {}\n", k, v);
  }
  PrintTensorTable(io, ckpt.tensors);
  return kExitOk;
}

struct ManifestArgs {
  std::string manifest = "vectors.json", id, path, kind = "full_delta", label, base_fingerprint;
};

int RunManifestAdd(const ManifestArgs& a, const Streams& io) {
  VectorManifest manifest;
  if (fs::exists(a.manifest)) manifest = VectorManifest::Load(a.manifest);
  const VectorKind kind = ParseVectorKind(a.kind);
  std::string fp = a.base_fingerprint;
  if (fp.empty()) {
    fs::path file(a.path);
    if (file.is_relative()) file = fs::path(a.manifest).parent_path() / file;
    const TaskVector v = LoadVector(file);
    fp = v.provenance.base_fingerprint;
  }
  manifest.Add({a.id, a.path, kind, fp, a.label});
  manifest.Save(a.manifest);
  fmt::print(io.out, "registered {} in {}\n", a.id, a.manifest);
  return kExitOk;
}

int RunManifestList(const ManifestArgs& a, const Streams& io) {
  const VectorManifest manifest = VectorManifest::Load(a.manifest);
  for (const ManifestEntry& e : manifest.entries()) {
    fmt::print(io.out, "{}\t{}\t{}\t{}\t{}\n", e.vector_id, VectorKindName(e.kind), e.label,
               e.base_fingerprint, e.path);
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Streams io{out, err};
  CLI::App app{"vecforge: task-vector arithmetic over neural-network checkpoints"};
  app.require_subcommand(1);
  std::function<int()> action;

  ExtractArgs extract;
  auto* cmd = app.add_subcommand("extract", "fine-tuned minus pretrained, written as a task vector");
  cmd->add_option("--pretrained", extract.pretrained)->required();
  cmd->add_option("--finetuned", extract.finetuned)->required();
  cmd->add_option("--out", extract.out)->required();
  cmd->add_option("--id", extract.id, "vector_id recorded in provenance");
  cmd->callback([&] { action = [&] { return RunExtract(extract, io); }; });

  MergeArgs merge;
  cmd = app.add_subcommand("merge", "base + sum(alpha_i * vector_i)");
  cmd->add_option("--base", merge.base)->required();
  cmd->add_option("--vector", merge.vectors, "vector file, adapter file, or manifest id")
      ->required();
  cmd->add_option("--alpha", merge.alphas)->required();
  cmd->add_option("--out", merge.out)->required();
  cmd->add_option("--manifest", merge.manifest, "vectors.json used to resolve ids");
  cmd->add_flag("--force", merge.force, "downgrade base fingerprint mismatches to warnings");
  cmd->callback([&] { action = [&] { return RunMerge(merge, io); }; });

  LoraExpandArgs expand;
  cmd = app.add_subcommand("lora-expand", "expand a LoRA adapter into a dense task vector");
  cmd->add_option("--adapter", expand.adapter)->required();
  cmd->add_option("--out", expand.out)->required();
  cmd->add_option("--base", expand.base, "base checkpoint to stamp the fingerprint from");
  cmd->add_option("--id", expand.id);
  cmd->callback([&] { action = [&] { return RunLoraExpand(expand, io); }; });

  SweepArgs sweep;
  cmd = app.add_subcommand("sweep", "evaluate a toy model merged at each point of an alpha grid");
  cmd->add_option("--base", sweep.base, "toy model checkpoint")->required();
  cmd->add_option("--vector", sweep.vector)->required();
  cmd->add_option("--vector2", sweep.vector2, "mix mode: coefficients (alpha, 1 - alpha)");
  cmd->add_option("--grid", sweep.grid, "start:stop:step")->capture_default_str();
  cmd->add_option("--task", sweep.task)->required();
  cmd->add_option("--task2", sweep.task2, "second task evaluated at every point");
  cmd->add_option("--out", sweep.out, "CSV output")->required();
  cmd->add_flag("--json", sweep.json, "also write a JSON mirror next to the CSV");
  cmd->add_option("--samples", sweep.samples)->capture_default_str();
  cmd->add_option("--seed", sweep.seed, "task sample-stream seed")->capture_default_str();
  cmd->add_option("--threads", sweep.threads, "0 = hardware concurrency");
  cmd->add_option("--scores", sweep.scores, "external scores CSV keyed by alpha");
  cmd->add_flag("--force", sweep.force);
  cmd->callback([&] { action = [&] { return RunSweep(sweep, io); }; });

  ToyArgs toy;
  auto* toy_cmd = app.add_subcommand("toy", "desk-scale LoRA lab");
  toy_cmd->require_subcommand(1);
  cmd = toy_cmd->add_subcommand("init", "create a toy base model");
  cmd->add_option("--out", toy.out)->required();
  cmd->add_option("--width", toy.width)->capture_default_str();
  cmd->add_option("--depth", toy.depth)->capture_default_str();
  cmd->add_option("--init", toy.init, "random | identity")->capture_default_str();
  cmd->add_option("--seed", toy.seed)->capture_default_str();
  cmd->callback([&] { action = [&] { return RunToyInit(toy, io); }; });

  cmd = toy_cmd->add_subcommand("train", "train a LoRA adapter on a synthetic task");
  cmd->add_option("--base", toy.base)->required();
  cmd->add_option("--task", toy.task)->capture_default_str();
  cmd->add_option("--out", toy.out)->required();
  cmd->add_option("--seed", toy.seed)->capture_default_str();
  cmd->add_option("--steps", toy.cfg.steps)->capture_default_str();
  cmd->add_option("--lr", toy.cfg.learning_rate)->capture_default_str();
  cmd->add_option("--batch-size", toy.cfg.batch_size)->capture_default_str();
  cmd->add_option("--rank", toy.cfg.lora_rank)->capture_default_str();
  cmd->add_option("--lora-alpha", toy.cfg.lora_alpha)->capture_default_str();
  cmd->callback([&] { action = [&] { return RunToyTrain(toy, io); }; });

  cmd = toy_cmd->add_subcommand("eval", "mean squared error of a toy model on a task");
  cmd->add_option("--model", toy.base)->required();
  cmd->add_option("--task", toy.task)->capture_default_str();
  cmd->add_option("--samples", toy.samples)->capture_default_str();
  cmd->add_option("--adapter", toy.adapter, "evaluate with this adapter in the loop");
  cmd->add_option("--adapter-scale", toy.adapter_scale)->capture_default_str();
  cmd->add_option("--seed", toy.seed)->capture_default_str();
  cmd->callback([&] { action = [&] { return RunToyEval(toy, io); }; });

  cmd = toy_cmd->add_subcommand("gradcheck", "finite-difference check of the LoRA gradients");
  cmd->add_option("--seed", toy.seed)->capture_default_str();
  cmd->callback([&] { action = [&] { return RunToyGradcheck(toy, io); }; });

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluation metrics over external outputs");
  eval_cmd->require_subcommand(1);
  for (const char* name : {"wer", "cer"}) {
    const bool word_level = std::string_view(name) == "wer";
    cmd = eval_cmd->add_subcommand(name, word_level ? "pooled word error rate"
                                                    : "pooled character error rate");
    cmd->add_option("--records", eval.records, "CSV or JSONL with ref, hyp, duration_seconds")
        ->required();
    cmd->add_option("--text-mode", eval.text_mode, "basic_en | none")->capture_default_str();
    cmd->callback([&, word_level] {
      action = [&, word_level] { return RunEvalRates(eval, io, word_level); };
    });
  }
  cmd = eval_cmd->add_subcommand("accent-sim", "cosine similarity to a reference centroid");
  cmd->add_option("--sample", eval.sample, "embedding file (one 1-D tensor per utterance)")
      ->required();
  cmd->add_option("--reference", eval.reference, "reference embedding file")->required();
  cmd->callback([&] { action = [&] { return RunEvalAccentSim(eval, io); }; });
  cmd = eval_cmd->add_subcommand("speaker-sim", "pairwise cosine similarity by utterance name");
  cmd->add_option("--reference", eval.reference)->required();
  cmd->add_option("--synth", eval.synth)->required();
  cmd->callback([&] { action = [&] { return RunEvalSpeakerSim(eval, io); }; });
  cmd = eval_cmd->add_subcommand("scores", "aggregate an external score table");
  cmd->add_option("--table", eval.table, "CSV with utterance_id,metric_name,value")->required();
  cmd->callback([&] { action = [&] { return RunEvalScores(eval, io); }; });

  InspectArgs inspect;
  cmd = app.add_subcommand("inspect", "print tensor statistics and provenance");
  cmd->add_option("--checkpoint", inspect.checkpoint);
  cmd->add_option("--vector", inspect.vector);
  cmd->callback([&] { action = [&] { return RunInspect(inspect, io); }; });

  ManifestArgs manifest;
  auto* manifest_cmd = app.add_subcommand("manifest", "registry of named task vectors");
  manifest_cmd->require_subcommand(1);
  cmd = manifest_cmd->add_subcommand("add", "register a vector file");
  cmd->add_option("--manifest", manifest.manifest)->capture_default_str();
  cmd->add_option("--id", manifest.id)->required();
  cmd->add_option("--path", manifest.path)->required();
  cmd->add_option("--kind", manifest.kind, "full_delta | lora")->capture_default_str();
  cmd->add_option("--label", manifest.label);
  cmd->add_option("--base-fingerprint", manifest.base_fingerprint,
                  "defaults to the fingerprint recorded in the file");
  cmd->callback([&] { action = [&] { return RunManifestAdd(manifest, io); }; });
  cmd = manifest_cmd->add_subcommand("list", "list registered vectors");
  cmd->add_option("--manifest", manifest.manifest)->capture_default_str();
  cmd->callback([&] { action = [&] { return RunManifestList(manifest, io); }; });

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    return action ? action() : kExitValidation;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.is_io() ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  }
}

}  // namespace vecforge::cli
