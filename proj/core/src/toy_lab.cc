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

#include "vecforge/toy_lab.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "vecforge/error.h"
#include "vecforge/format.h"
#include "vecforge/random.h"

namespace vecforge {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string_view ActivationName(Activation act) {
  return act == Activation::kTanh ? "tanh" : "identity";
}

Activation ParseActivation(std::string_view name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown activation '{}'", name));
}

// ---------------------------------------------------------------------------
// ToyModel

std::string ToyModel::WeightKey(std::size_t layer) { return fmt::format("layer{}.weight", layer); }
std::string ToyModel::BiasKey(std::size_t layer) { return fmt::format("layer{}.bias", layer); }

ToyModel::ToyModel(std::vector<LayerSpec> layers, Checkpoint weights)
    : layers_(std::move(layers)), weights_(std::move(weights)) {
  if (layers_.empty()) throw Error(ErrorCode::kConfigError, "a toy model needs at least one layer");
  std::size_t expected_tensors = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& spec = layers_[i];
    if (spec.in_dim == 0 || spec.out_dim == 0) {
      throw Error(ErrorCode::kConfigError, fmt::format("layer {} has a zero dimension", i));
    }
    if (i > 0 && layers_[i - 1].out_dim != spec.in_dim) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("layer {} outputs {} but layer {} expects {}", i - 1,
                              layers_[i - 1].out_dim, i, spec.in_dim));
    }
    const Tensor& w = weights_.at(WeightKey(i));
    const Tensor& b = weights_.at(BiasKey(i));
    if (w.shape() != Shape{spec.out_dim, spec.in_dim} || b.shape() != Shape{spec.out_dim}) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("layer {} expects weight [{}, {}] and bias [{}], got {} and {}", i,
                              spec.out_dim, spec.in_dim, spec.out_dim, ShapeString(w.shape()),
                              ShapeString(b.shape())));
    }
    expected_tensors += 2;
  }
  if (weights_.tensors.size() != expected_tensors) {
    throw Error(ErrorCode::kKeySetMismatch, "toy model checkpoint has unexpected tensors");
  }
}

ToyModel ToyModel::Create(std::vector<LayerSpec> layers, ModelInit init, std::uint64_t seed) {
  Checkpoint weights;
  Rng rng(MixSeed(seed, 0x70));
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& spec = layers[i];
    std::vector<float> w(spec.out_dim * spec.in_dim, 0.0f);
    std::vector<float> b(spec.out_dim, 0.0f);
    if (init == ModelInit::kIdentity) {
      if (spec.in_dim != spec.out_dim) {
        throw Error(ErrorCode::kConfigError,
                    fmt::format("identity init needs square layers; layer {} is {}x{}", i,
                                spec.out_dim, spec.in_dim));
      }
      for (std::size_t r = 0; r < spec.out_dim; ++r) w[r * spec.in_dim + r] = 1.0f;
    } else {
      const double stddev = 1.0 / std::sqrt(static_cast<double>(spec.in_dim));
      for (float& v : w) v = static_cast<float>(rng.Gaussian(0.0, stddev));
      for (float& v : b) v = static_cast<float>(rng.Gaussian(0.0, 0.01));
    }
    weights.Add(WeightKey(i), Tensor({spec.out_dim, spec.in_dim}, std::move(w)));
    weights.Add(BiasKey(i), Tensor({spec.out_dim}, std::move(b)));
  }
  return ToyModel(std::move(layers), std::move(weights));
}

Checkpoint ToyModel::ToCheckpoint() const {
  Checkpoint ckpt = weights_;
  std::vector<std::string_view> acts;
  for (const LayerSpec& s : layers_) acts.push_back(ActivationName(s.activation));
  ckpt.metadata["kind"] = "toy_model";
  ckpt.metadata["activations"] = fmt::format("{}", fmt::join(acts, ","));
  return ckpt;
}

ToyModel ToyModel::FromCheckpoint(const Checkpoint& ckpt) {
  auto it = ckpt.metadata.find("activations");
  if (it == ckpt.metadata.end()) {
    throw Error(ErrorCode::kFormatError, "toy model checkpoint lacks 'activations' metadata");
  }
  std::vector<LayerSpec> layers;
  std::stringstream ss(it->second);
  std::string item;
  for (std::size_t i = 0; std::getline(ss, item, ','); ++i) {
    const Tensor& w = ckpt.at(WeightKey(i));
    if (w.rank() != 2) {
      throw Error(ErrorCode::kShapeMismatch, fmt::format("{} must be a matrix", WeightKey(i)));
    }
    layers.push_back({w.shape()[1], w.shape()[0], ParseActivation(item)});
  }
  Checkpoint weights = ckpt;
  weights.metadata.erase("kind");
  weights.metadata.erase("activations");
  return ToyModel(std::move(layers), std::move(weights));
}

ToyModel ToyModel::WithWeights(Checkpoint weights) const {
  return ToyModel(layers_, std::move(weights));
}

std::vector<LayerSpec> ReferenceArchitecture(std::size_t width) {
  return {{width, width, Activation::kTanh}, {width, width, Activation::kIdentity}};
}

// ---------------------------------------------------------------------------
// SyntheticTask

SyntheticTask::SyntheticTask(std::string id, std::size_t dim, std::uint64_t seed,
                             std::vector<double> map)
    : id_(std::move(id)), dim_(dim), seed_(seed), map_(std::move(map)) {}

SyntheticTask SyntheticTask::FromPreset(std::string_view preset, std::size_t dim,
                                        std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kConfigError, "task dimension must be positive");
  std::vector<double> m(dim * dim, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return m[r * dim + c]; };
  if (preset == "identity") {
    for (std::size_t i = 0; i < dim; ++i) at(i, i) = 1.0;
  } else if (preset == "scale") {
    for (std::size_t i = 0; i < dim; ++i) {
      at(i, i) = dim == 1 ? 1.0 : 0.5 + static_cast<double>(i) / static_cast<double>(dim - 1);
    }
  } else if (preset.starts_with("rotate:")) {
    const double deg = ParseDouble(preset.substr(7), "rotation angle");
    const double rad = deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    std::size_t i = 0;
    for (; i + 1 < dim; i += 2) {
      at(i, i) = c;
      at(i, i + 1) = -s;
      at(i + 1, i) = s;
      at(i + 1, i + 1) = c;
    }
    if (i < dim) at(i, i) = 1.0;
  } else {
    throw Error(ErrorCode::kConfigError,
                fmt::format("unknown task '{}' (identity, scale, rotate:<deg>)", preset));
  }
  return SyntheticTask(std::string(preset), dim, seed, std::move(m));
}

SyntheticTask::Batch SyntheticTask::Sample(std::uint64_t stream_seed, std::size_t n) const {
  Rng rng(stream_seed);
  Batch batch;
  batch.n = n;
  batch.inputs.resize(n * dim_);
  batch.targets.assign(n * dim_, 0.0);
  for (double& v : batch.inputs) v = rng.Uniform(-1.0, 1.0);
  for (std::size_t s = 0; s < n; ++s) {
    const double* x = &batch.inputs[s * dim_];
    double* t = &batch.targets[s * dim_];
    for (std::size_t r = 0; r < dim_; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) acc += map_[r * dim_ + c] * x[c];
      t[r] = acc;
    }
  }
  return batch;
}

// ---------------------------------------------------------------------------
// Dense 64-bit forward/backward

namespace {

struct DenseLayer {
  MatrixXd w;
  VectorXd b;
  Activation act;
};

struct DenseFactors {
  MatrixXd a;  // rank x in
  MatrixXd b;  // out x rank
};

// Per-layer factors; an empty optional slot means the layer is not adapted.
struct DenseAdapter {
  std::vector<std::optional<DenseFactors>> layers;
  double scale = 0.0;  // adapter_scale * lora_alpha / rank
};

MatrixXd ToMatrix(const Tensor& t) {
  MatrixXd m(t.shape()[0], t.shape()[1]);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.at(r, c);
  }
  return m;
}

std::vector<DenseLayer> DenseLayers(const ToyModel& model) {
  std::vector<DenseLayer> out;
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    const Tensor& bias = model.weights().at(ToyModel::BiasKey(i));
    VectorXd b(bias.size());
    for (std::size_t j = 0; j < bias.size(); ++j) b(j) = bias.data()[j];
    out.push_back({ToMatrix(model.weights().at(ToyModel::WeightKey(i))), std::move(b),
                   model.layers()[i].activation});
  }
  return out;
}

DenseAdapter ToDense(const ToyModel& model, const LoraAdapter& adapter, double adapter_scale) {
  adapter.Validate();
  DenseAdapter dense;
  dense.scale = adapter_scale * adapter.scaling();
  dense.layers.resize(model.layers().size());
  std::size_t matched = 0;
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    auto it = adapter.layers.find(ToyModel::WeightKey(i));
    if (it == adapter.layers.end()) continue;
    const LayerSpec& spec = model.layers()[i];
    if (it->second.in_dim() != spec.in_dim || it->second.out_dim() != spec.out_dim) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("adapter for '{}' does not fit a {}x{} layer", it->first,
                              spec.out_dim, spec.in_dim));
    }
    dense.layers[i] = DenseFactors{ToMatrix(it->second.a), ToMatrix(it->second.b)};
    ++matched;
  }
  if (matched != adapter.layers.size()) {
    throw Error(ErrorCode::kUnknownKey, "adapter references layers the model does not have");
  }
  return dense;
}

// Columns are samples.
MatrixXd ToColumns(const std::vector<double>& rows, std::size_t n, std::size_t dim) {
  return Eigen::Map<const RowMatrixXd>(rows.data(), n, dim).transpose();
}

struct Trace {
  std::vector<MatrixXd> inputs;   // input to each layer
  std::vector<MatrixXd> outputs;  // activation output of each layer
};

MatrixXd Run(const std::vector<DenseLayer>& layers, const DenseAdapter* adapter, MatrixXd h,
             Trace* trace) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& layer = layers[i];
    MatrixXd z = layer.w * h;
    z.colwise() += layer.b;
    if (adapter != nullptr && adapter->scale != 0.0 && adapter->layers[i]) {
      const DenseFactors& f = *adapter->layers[i];
      z.noalias() += adapter->scale * (f.b * (f.a * h));
    }
    if (layer.act == Activation::kTanh) z = z.array().tanh().matrix();
    if (trace != nullptr) trace->inputs.push_back(std::move(h));
    h = std::move(z);
    if (trace != nullptr) trace->outputs.push_back(h);
  }
  return h;
}

double MeanSquaredError(const MatrixXd& y, const MatrixXd& t) {
  return (y - t).colwise().squaredNorm().sum() / static_cast<double>(y.cols());
}

// Loss and factor gradients for one batch. Gradients are emitted only for
// adapted layers, in layer order.
double Backprop(const std::vector<DenseLayer>& layers, const DenseAdapter& adapter,
                const MatrixXd& x, const MatrixXd& t, std::vector<DenseFactors>* grads) {
  Trace trace;
  const MatrixXd y = Run(layers, &adapter, x, &trace);
  const double loss = MeanSquaredError(y, t);
  if (grads == nullptr) return loss;

  grads->assign(layers.size(), {});
  MatrixXd g = 2.0 * (y - t) / static_cast<double>(x.cols());
  for (std::size_t li = layers.size(); li-- > 0;) {
    const DenseLayer& layer = layers[li];
    if (layer.act == Activation::kTanh) {
      g = (g.array() * (1.0 - trace.outputs[li].array().square())).matrix();
    }
    const MatrixXd& h = trace.inputs[li];
    MatrixXd g_prev = layer.w.transpose() * g;
    if (adapter.layers[li]) {
      const DenseFactors& f = *adapter.layers[li];
      const MatrixXd ah = f.a * h;
      const MatrixXd btg = f.b.transpose() * g;
      (*grads)[li].b = adapter.scale * g * ah.transpose();
      (*grads)[li].a = adapter.scale * btg * h.transpose();
      g_prev.noalias() += adapter.scale * (f.a.transpose() * btg);
    }
    g = std::move(g_prev);
  }
  return loss;
}

Tensor ToTensor(const MatrixXd& m) {
  std::vector<double> values(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) values[r * m.cols() + c] = m(r, c);
  }
  return Tensor::FromDoubles({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                             values);
}

std::vector<double> RowMajor(const MatrixXd& m) {
  std::vector<double> out(m.size());
  Eigen::Map<RowMatrixXd>(out.data(), m.rows(), m.cols()) = m;
  return out;
}

void CheckInput(const ToyModel& model, std::size_t dim) {
  if (dim != model.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("input has {} features, model expects {}", dim, model.input_dim()));
  }
}

}  // namespace

Tensor Forward(const ToyModel& model, const Tensor& x, const LoraAdapter* adapter,
               double adapter_scale) {
  if (x.rank() != 1 && x.rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch, "forward expects a vector or a batch of rows");
  }
  const std::size_t dim = x.shape().back();
  const std::size_t n = x.rank() == 1 ? 1 : x.shape()[0];
  CheckInput(model, dim);
  std::vector<double> rows(x.data().begin(), x.data().end());
  const auto layers = DenseLayers(model);
  std::optional<DenseAdapter> dense;
  if (adapter != nullptr) dense = ToDense(model, *adapter, adapter_scale);
  const MatrixXd y = Run(layers, dense ? &*dense : nullptr, ToColumns(rows, n, dim), nullptr);
  const MatrixXd out = y.transpose();
  std::vector<double> values = RowMajor(out);
  Shape shape = x.rank() == 1 ? Shape{model.output_dim()} : Shape{n, model.output_dim()};
  return Tensor::FromDoubles(std::move(shape), values);
}

void TrainConfig::Validate(const ToyModel& model) const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kConfigError, "learning_rate must be positive");
  }
  if (batch_size == 0) throw Error(ErrorCode::kConfigError, "batch_size must be positive");
  if (lora_rank == 0) throw Error(ErrorCode::kConfigError, "lora_rank must be positive");
  if (!(lora_alpha > 0.0)) throw Error(ErrorCode::kConfigError, "lora_alpha must be positive");
  for (const LayerSpec& s : model.layers()) {
    if (lora_rank > std::min(s.in_dim, s.out_dim)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("lora_rank {} exceeds layer dims {}x{}", lora_rank, s.out_dim,
                              s.in_dim));
    }
  }
}

LoraAdapter TrainLora(const ToyModel& model, const SyntheticTask& task, const TrainConfig& cfg,
                      TrainLog* log) {
  cfg.Validate(model);
  CheckInput(model, task.dim());
  if (task.dim() != model.output_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "task targets do not match the model output size");
  }
  const auto layers = DenseLayers(model);
  const std::size_t nl = layers.size();

  DenseAdapter adapter;
  adapter.scale = cfg.lora_alpha / static_cast<double>(cfg.lora_rank);
  adapter.layers.resize(nl);
  Rng init_rng(MixSeed(cfg.seed, 0xa1));
  for (std::size_t i = 0; i < nl; ++i) {
    DenseFactors f;
    f.a = MatrixXd(cfg.lora_rank, layers[i].w.cols());
    for (Eigen::Index r = 0; r < f.a.rows(); ++r) {
      for (Eigen::Index c = 0; c < f.a.cols(); ++c) f.a(r, c) = init_rng.Gaussian(0.0, cfg.init_stddev);
    }
    f.b = MatrixXd::Zero(layers[i].w.rows(), cfg.lora_rank);
    adapter.layers[i] = std::move(f);
  }

  std::vector<DenseFactors> m(nl), v(nl), grads;
  for (std::size_t i = 0; i < nl; ++i) {
    m[i] = {MatrixXd::Zero(adapter.layers[i]->a.rows(), adapter.layers[i]->a.cols()),
            MatrixXd::Zero(adapter.layers[i]->b.rows(), adapter.layers[i]->b.cols())};
    v[i] = m[i];
  }

  const std::uint64_t data_seed = MixSeed(cfg.seed ^ task.seed(), 0xda);
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const auto batch = task.Sample(MixSeed(data_seed, step), cfg.batch_size);
    const double loss = Backprop(layers, adapter, ToColumns(batch.inputs, batch.n, task.dim()),
                                 ToColumns(batch.targets, batch.n, task.dim()), &grads);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence, fmt::format("loss became {} at step {}", loss, step));
    }
    if (log != nullptr) log->losses.push_back(loss);

    const double t = static_cast<double>(step + 1);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    auto update = [&](MatrixXd& param, MatrixXd& m1, MatrixXd& m2, const MatrixXd& g) {
      m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
      m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g.cwiseProduct(g);
      param.array() -= cfg.learning_rate * (m1.array() / c1) /
                       ((m2.array() / c2).sqrt() + cfg.epsilon);
    };
    for (std::size_t i = 0; i < nl; ++i) {
      update(adapter.layers[i]->a, m[i].a, v[i].a, grads[i].a);
      update(adapter.layers[i]->b, m[i].b, v[i].b, grads[i].b);
    }
  }

  LoraAdapter out;
  out.rank = cfg.lora_rank;
  out.lora_alpha = cfg.lora_alpha;
  for (std::size_t i = 0; i < nl; ++i) {
    out.layers.emplace(ToyModel::WeightKey(i),
                       LoraLayer{ToTensor(adapter.layers[i]->a), ToTensor(adapter.layers[i]->b)});
  }
  out.metadata["base_fingerprint"] = Fingerprint(model.weights());
  out.metadata["task"] = task.id();
  out.metadata["seed"] = std::to_string(cfg.seed);
  out.metadata["steps"] = std::to_string(cfg.steps);
  return out;
}

LoraAdapter RandomAdapter(const ToyModel& model, std::size_t rank, double lora_alpha,
                          std::uint64_t seed, double stddev) {
  Rng rng(MixSeed(seed, 0xad));
  LoraAdapter out;
  out.rank = rank;
  out.lora_alpha = lora_alpha;
  auto fill = [&](std::size_t rows, std::size_t cols) {
    std::vector<float> v(rows * cols);
    for (float& x : v) x = static_cast<float>(rng.Gaussian(0.0, stddev));
    return Tensor({rows, cols}, std::move(v));
  };
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    const LayerSpec& spec = model.layers()[i];
    Tensor a = fill(rank, spec.in_dim);
    Tensor b = fill(spec.out_dim, rank);
    out.layers.emplace(ToyModel::WeightKey(i), LoraLayer{std::move(a), std::move(b)});
  }
  out.metadata["base_fingerprint"] = Fingerprint(model.weights());
  out.Validate();
  return out;
}

double Evaluate(const ToyModel& model, const SyntheticTask& task, std::size_t n,
                const LoraAdapter* adapter, double adapter_scale) {
  if (n == 0) throw Error(ErrorCode::kConfigError, "evaluation needs at least one sample");
  CheckInput(model, task.dim());
  const auto batch = task.Sample(n);
  const auto layers = DenseLayers(model);
  std::optional<DenseAdapter> dense;
  if (adapter != nullptr) dense = ToDense(model, *adapter, adapter_scale);
  const MatrixXd y =
      Run(layers, dense ? &*dense : nullptr, ToColumns(batch.inputs, n, task.dim()), nullptr);
  return MeanSquaredError(y, ToColumns(batch.targets, n, task.dim()));
}

FactorGradients LoraGradients(const ToyModel& model, const LoraAdapter& adapter,
                              const SyntheticTask::Batch& batch, double* loss) {
  const std::size_t dim = batch.n == 0 ? 0 : batch.inputs.size() / batch.n;
  CheckInput(model, dim);
  const auto layers = DenseLayers(model);
  const DenseAdapter dense = ToDense(model, adapter, 1.0);
  std::vector<DenseFactors> grads;
  const double l = Backprop(layers, dense, ToColumns(batch.inputs, batch.n, dim),
                            ToColumns(batch.targets, batch.n, dim), &grads);
  if (loss != nullptr) *loss = l;
  FactorGradients out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!dense.layers[i]) continue;
    const std::string key = ToyModel::WeightKey(i);
    out[key + std::string(kLoraASuffix)] = RowMajor(grads[i].a);
    out[key + std::string(kLoraBSuffix)] = RowMajor(grads[i].b);
  }
  return out;
}

double GradientCheck(const ToyModel& model, const LoraAdapter& adapter, const SyntheticTask& task,
                     const GradientCheckOptions& options) {
  if (adapter.ParameterCount() > 1000) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("gradient check is limited to 1000 adapted parameters, got {}",
                            adapter.ParameterCount()));
  }
  const auto batch = task.Sample(options.stream_seed, options.samples);
  FactorGradients analytic = LoraGradients(model, adapter, batch);
  if (options.corrupt) options.corrupt(analytic);

  const auto layers = DenseLayers(model);
  DenseAdapter dense = ToDense(model, adapter, 1.0);
  const MatrixXd x = ToColumns(batch.inputs, batch.n, task.dim());
  const MatrixXd t = ToColumns(batch.targets, batch.n, task.dim());

  double worst = 0.0;
  auto compare = [&](MatrixXd& param, const std::vector<double>& g) {
    Eigen::Map<const RowMatrixXd> ga(g.data(), param.rows(), param.cols());
    for (Eigen::Index r = 0; r < param.rows(); ++r) {
      for (Eigen::Index c = 0; c < param.cols(); ++c) {
        const double saved = param(r, c);
        param(r, c) = saved + options.step;
        const double up = Backprop(layers, dense, x, t, nullptr);
        param(r, c) = saved - options.step;
        const double down = Backprop(layers, dense, x, t, nullptr);
        param(r, c) = saved;
        const double numeric = (up - down) / (2.0 * options.step);
        const double denom = std::max(std::fabs(ga(r, c)), std::fabs(numeric));
        if (denom < options.zero_guard) continue;
        worst = std::max(worst, std::fabs(ga(r, c) - numeric) / denom);
      }
    }
  };
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!dense.layers[i]) continue;
    const std::string key = ToyModel::WeightKey(i);
    compare(dense.layers[i]->a, analytic.at(key + std::string(kLoraASuffix)));
    compare(dense.layers[i]->b, analytic.at(key + std::string(kLoraBSuffix)));
  }
  return worst;
}

GradientCheckSetup ReferenceGradientCheckSetup(std::uint64_t seed) {
  constexpr std::size_t kWidth = 8;
  ToyModel model = ToyModel::Create(ReferenceArchitecture(kWidth), ModelInit::kRandom, seed);
  LoraAdapter adapter = RandomAdapter(model, 4, 8.0, seed, 0.1);
  return {std::move(model), std::move(adapter), SyntheticTask::FromPreset("rotate:30", kWidth, seed)};
}

}  // namespace vecforge
