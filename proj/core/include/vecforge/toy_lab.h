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

#ifndef VECFORGE_TOY_LAB_H_
#define VECFORGE_TOY_LAB_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vecforge/checkpoint.h"
#include "vecforge/lora.h"
#include "vecforge/tensor.h"

namespace vecforge {

enum class Activation { kTanh, kIdentity };

std::string_view ActivationName(Activation act);
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::kIdentity;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

enum class ModelInit {
  kIdentity,  // W = I (square layers only), b = 0
  kRandom,    // W ~ N(0, 1/in), b ~ N(0, 0.01^2)
};

// Small feed-forward network: layer<i>.weight (out x in), layer<i>.bias (out).
class ToyModel {
 public:
  // Throws ConfigError for dims that do not chain or weights that do not fit.
  ToyModel(std::vector<LayerSpec> layers, Checkpoint weights);

  static ToyModel Create(std::vector<LayerSpec> layers, ModelInit init, std::uint64_t seed);

  // Round-trips through a checkpoint tagged kind=toy_model with an
  // `activations` metadata entry ("tanh,identity").
  static ToyModel FromCheckpoint(const Checkpoint& ckpt);
  Checkpoint ToCheckpoint() const;

  // Same architecture, different weights (e.g. a merged checkpoint).
  ToyModel WithWeights(Checkpoint weights) const;

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const Checkpoint& weights() const { return weights_; }
  std::size_t input_dim() const { return layers_.front().in_dim; }
  std::size_t output_dim() const { return layers_.back().out_dim; }

  static std::string WeightKey(std::size_t layer);
  static std::string BiasKey(std::size_t layer);

 private:
  std::vector<LayerSpec> layers_;
  Checkpoint weights_;
};

// Two width x width layers, tanh then identity: the reference toy backbone.
std::vector<LayerSpec> ReferenceArchitecture(std::size_t width = 16);

// Linear regression task y = M x with x uniform in [-1, 1]^dim.
class SyntheticTask {
 public:
  // Presets:
  //   identity        M = I
  //   rotate:<deg>    rotation by <deg> degrees in every coordinate pair
  //                   (0,1), (2,3), ...; an odd last coordinate is kept
  //   scale           anisotropic diagonal, evenly spaced over [0.5, 1.5]
  static SyntheticTask FromPreset(std::string_view preset, std::size_t dim, std::uint64_t seed);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  // Row-major dim x dim.
  const std::vector<double>& map() const { return map_; }

  struct Batch {
    std::vector<double> inputs;   // n x dim, row-major
    std::vector<double> targets;  // n x dim, row-major
    std::size_t n = 0;
  };

  // First n samples of the stream keyed by stream_seed.
  Batch Sample(std::uint64_t stream_seed, std::size_t n) const;
  // The task's own evaluation stream.
  Batch Sample(std::size_t n) const { return Sample(seed_, n); }

 private:
  SyntheticTask(std::string id, std::size_t dim, std::uint64_t seed, std::vector<double> map);

  std::string id_;
  std::size_t dim_;
  std::uint64_t seed_;
  std::vector<double> map_;
};

// Learning rate and step count of the large-scale setup. The toy defaults
// are in TrainConfig.
inline constexpr double kRealScaleLearningRate = 3e-5;
inline constexpr std::size_t kRealScaleSteps = 60000;

struct TrainConfig {
  double learning_rate = 1e-2;
  std::size_t steps = 2000;
  std::size_t batch_size = 32;
  std::size_t lora_rank = 16;
  double lora_alpha = 16.0;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double init_stddev = 0.02;

  void Validate(const ToyModel& model) const;
};

// Input rows are samples: x is (dim) or (n x dim). Each layer computes
// act(W h + b + adapter_scale * s * B (A h)).
Tensor Forward(const ToyModel& model, const Tensor& x, const LoraAdapter* adapter = nullptr,
               double adapter_scale = 1.0);

struct TrainLog {
  std::vector<double> losses;  // one entry per step, before the update
};

// Adam on the LoRA factors of every layer weight with the base frozen.
// A ~ N(0, init_stddev^2), B = 0. Loss is the batch mean of ||y - t||^2.
// Throws DivergenceError if the loss becomes non-finite.
LoraAdapter TrainLora(const ToyModel& model, const SyntheticTask& task, const TrainConfig& cfg,
                      TrainLog* log = nullptr);

// Adapter on every layer weight with both factors drawn from N(0, stddev^2).
LoraAdapter RandomAdapter(const ToyModel& model, std::size_t rank, double lora_alpha,
                          std::uint64_t seed, double stddev = 0.1);

// Mean over the task's first n samples of ||y - t||^2.
double Evaluate(const ToyModel& model, const SyntheticTask& task, std::size_t n,
                const LoraAdapter* adapter = nullptr, double adapter_scale = 1.0);

// Analytic gradients of the loss w.r.t. every factor, keyed like the adapter
// container ("<layer>.lora_A", "<layer>.lora_B"), row-major.
using FactorGradients = std::map<std::string, std::vector<double>>;

FactorGradients LoraGradients(const ToyModel& model, const LoraAdapter& adapter,
                              const SyntheticTask::Batch& batch, double* loss = nullptr);

struct GradientCheckOptions {
  double step = 1e-4;
  std::size_t samples = 8;
  std::uint64_t stream_seed = 12345;
  // Components whose analytic and numeric magnitudes are both below this
  // count as agreeing exactly.
  double zero_guard = 1e-9;
  // Test hook applied to the analytic gradients before comparison.
  std::function<void(FactorGradients&)> corrupt;
};

// Max over components of |analytic - numeric| / max(|analytic|, |numeric|),
// with central differences evaluated in 64-bit.
double GradientCheck(const ToyModel& model, const LoraAdapter& adapter, const SyntheticTask& task,
                     const GradientCheckOptions& options = {});

// Reference gradient-check configuration: 8-wide reference architecture with
// random init, a rank-4 adapter (lora_alpha 8, factors N(0, 0.1^2)) and the
// rotate:30 task. 128 adapted parameters.
struct GradientCheckSetup {
  ToyModel model;
  LoraAdapter adapter;
  SyntheticTask task;
};

GradientCheckSetup ReferenceGradientCheckSetup(std::uint64_t seed = 0);

}  // namespace vecforge

#endif  // VECFORGE_TOY_LAB_H_
