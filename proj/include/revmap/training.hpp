// Copyright 2026 The revmap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// End-to-end experiment: dataset -> embedding -> ansatz -> cross-entropy
// minimization -> accuracy, repeated over seeds.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "revmap/alpha.hpp"
#include "revmap/data.hpp"
#include "revmap/embeddings.hpp"
#include "revmap/model.hpp"
#include "revmap/optimize.hpp"
#include "revmap/rng.hpp"
#include "revmap/simulator.hpp"

namespace revmap {

/// Amplitude embedding of all 256 pixels, or E_alpha of the 255-vector.
struct EmbeddingChoice {
  bool amplitude = false;
  Alpha alpha = Alpha::gnomonic();

  static EmbeddingChoice amplitude_embedding() { return {true, Alpha::gnomonic()}; }
  static EmbeddingChoice reverse(Alpha a) { return {false, a}; }

  std::string name() const { return amplitude ? "amplitude" : "reverse_" + alpha.name(); }
};

struct ExperimentConfig {
  EmbeddingChoice embedding;
  /// Ignored by the amplitude embedding.
  double scale_M = 1.0;
  AnsatzKind model_kind = AnsatzKind::kEquivariant;
  /// `mode` is overridden to match `model_kind`.
  DatasetOptions data;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  MinimizeOptions optimizer;
  /// Offsets sample/flip/split seeds by the repeat index.
  bool reseed_data_per_repeat = true;
};

inline DataMode data_mode_for(AnsatzKind kind) {
  return kind == AnsatzKind::kEquivariant ? DataMode::kEquivariant
                                          : DataMode::kNonEquivariant;
}

struct LabeledStates {
  std::vector<QuantumState> states;
  std::vector<int> labels;
};

inline QuantumState embed_sample(const EmbeddingChoice& emb, double scale_M,
                                 const Sample& s) {
  if (emb.amplitude) {
    Eigen::VectorXd px(kPixels);
    for (int i = 0; i < kPixels; ++i) px[i] = s.image.pixels[static_cast<std::size_t>(i)];
    return QuantumState::from_real(amplitude_embed(px, kPixels).coords);
  }
  if (!(scale_M > 0.0)) throw Error(ErrorCode::kInvalidInput, "scale M must be positive");
  return QuantumState::from_real(
      embed(EmbeddingConfig{emb.alpha, scale_M}, s.prepared.vector).coords);
}

inline LabeledStates embed_dataset(const EmbeddingChoice& emb, double scale_M,
                                   std::span<const Sample> samples) {
  LabeledStates out;
  out.states.reserve(samples.size());
  for (const auto& s : samples) {
    out.states.push_back(embed_sample(emb, scale_M, s));
    out.labels.push_back(s.prepared.label);
  }
  return out;
}

inline std::vector<double> predict_probabilities(const AnsatzSpec& spec,
                                                 std::span<const double> params,
                                                 const LabeledStates& data) {
  std::vector<double> probs;
  probs.reserve(data.states.size());
  for (const auto& st : data.states) probs.push_back(forward(spec, params, st).probability);
  return probs;
}

inline double dataset_loss(const AnsatzSpec& spec, std::span<const double> params,
                           const LabeledStates& data) {
  const auto probs = predict_probabilities(spec, params, data);
  return cross_entropy(probs, data.labels);
}

/// Fraction of samples whose thresholded prediction matches the label.
inline double evaluate(const AnsatzSpec& spec, std::span<const double> params,
                       const LabeledStates& data) {
  if (data.states.empty()) throw Error(ErrorCode::kEmptyInput, "no samples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.states.size(); ++i) {
    correct += forward(spec, params, data.states[i]).predicted_label == data.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(data.states.size());
}

struct RepeatResult {
  std::size_t repeat = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double best_loss = 0.0;
  std::vector<HistoryEntry> history;
  std::vector<double> params;
  /// max over test images of |p(prepare(hflip(img))) - p(prepare(img))|.
  double flip_gap = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

inline MeanStd mean_std(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

struct RunReport {
  std::string embedding;
  double alpha = 0.0;  // -inf for orthographic, NaN for amplitude
  double scale_M = 1.0;
  AnsatzKind model_kind = AnsatzKind::kEquivariant;
  std::vector<RepeatResult> repeats;

  MeanStd test_accuracy() const {
    std::vector<double> v;
    for (const auto& r : repeats) v.push_back(r.test_accuracy);
    return mean_std(v);
  }
  MeanStd train_accuracy() const {
    std::vector<double> v;
    for (const auto& r : repeats) v.push_back(r.train_accuracy);
    return mean_std(v);
  }
};

/// Uniform(-pi, pi) initial parameters.
inline std::vector<double> initial_parameters(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(count);
  for (auto& v : p) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return p;
}

inline double flip_gap(const ExperimentConfig& cfg, const AnsatzSpec& spec,
                       std::span<const double> params, std::span<const Sample> samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    Sample flipped = s;
    flipped.image = hflip(s.image);
    flipped.prepared = prepare(flipped.image, data_mode_for(cfg.model_kind),
                               cfg.data.corner_rule);
    const double p0 = forward(spec, params, embed_sample(cfg.embedding, cfg.scale_M, s)).probability;
    const double p1 =
        forward(spec, params, embed_sample(cfg.embedding, cfg.scale_M, flipped)).probability;
    worst = std::max(worst, std::abs(p1 - p0));
  }
  return worst;
}

inline DatasetOptions repeat_data_options(const ExperimentConfig& cfg, std::size_t r) {
  DatasetOptions d = cfg.data;
  d.mode = data_mode_for(cfg.model_kind);
  if (cfg.reseed_data_per_repeat) {
    d.sample_seed += r;
    d.flip_seed += r;
    d.split_seed += r;
  }
  return d;
}

/// Trains a model on one prepared split and scores it.
inline RepeatResult train_on_split(const ExperimentConfig& cfg, const DatasetSplit& split,
                                   std::size_t r) {
  const AnsatzSpec spec = build_ansatz(cfg.model_kind);
  const LabeledStates train_set = embed_dataset(cfg.embedding, cfg.scale_M, split.train);
  const LabeledStates test_set = embed_dataset(cfg.embedding, cfg.scale_M, split.test);

  Objective obj(spec.param_count(), [&](std::span<const double> p) {
    return dataset_loss(spec, p, train_set);
  });
  MinimizeOptions opt = cfg.optimizer;
  opt.seed = cfg.seed + r;
  const auto x0 = initial_parameters(spec.param_count(), cfg.seed + r);
  OptResult res = minimize(obj, x0, opt);

  RepeatResult out;
  out.repeat = r;
  out.params = res.best_params;
  out.best_loss = res.best_loss;
  out.history = std::move(res.history);
  out.train_accuracy = evaluate(spec, out.params, train_set);
  out.test_accuracy = test_set.states.empty() ? 0.0 : evaluate(spec, out.params, test_set);
  out.flip_gap = flip_gap(cfg, spec, out.params, split.test);
  return out;
}

inline RunReport train(const ExperimentConfig& cfg, const FashionPool* pool = nullptr) {
  RunReport report;
  report.embedding = cfg.embedding.name();
  report.alpha = cfg.embedding.amplitude ? std::nan("") : cfg.embedding.alpha.value();
  report.scale_M = cfg.scale_M;
  report.model_kind = cfg.model_kind;

  std::optional<FashionPool> loaded;
  if (cfg.data.source == SourceKind::kFashionMnist && pool == nullptr) {
    loaded = load_fashion_pool(cfg.data.fashion_dir);
    pool = &*loaded;
  }
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    const DatasetSplit split = build_dataset(repeat_data_options(cfg, r), pool);
    report.repeats.push_back(train_on_split(cfg, split, r));
  }
  return report;
}

/// Residual of E_alpha(rho x) = (rho (+) 1) E_alpha(x) for the image flip
/// restricted to the 255 retained coordinates (index 15 fixed), over random
/// nonnegative pixel vectors of norm up to `max_norm`.
inline double strict_flip_equivariance_residual(const Alpha& alpha, double scale_M,
                                                std::size_t samples, std::uint64_t seed,
                                                double max_norm = 3000.0) {
  Rng rng(seed);
  double worst = 0.0;
  const EmbeddingConfig cfg{alpha, scale_M};
  for (std::size_t k = 0; k < samples; ++k) {
    Eigen::VectorXd x(kFinalPixel);
    for (int i = 0; i < kFinalPixel; ++i) x[i] = rng.uniform01();
    x *= rng.uniform(0.0, max_norm) / x.norm();
    const Eigen::VectorXd ex = embed(cfg, x).coords;
    Eigen::VectorXd rhs(kPixels);
    rhs.head(kFinalPixel) = flip_prepared(ex.head(kFinalPixel));
    rhs[kFinalPixel] = ex[kFinalPixel];
    const Eigen::VectorXd lhs = embed(cfg, flip_prepared(x)).coords;
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace revmap
