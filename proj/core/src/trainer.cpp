// Copyright 2026 The shrimpcnn Authors. All Rights Reserved.
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

#include "shrimpcnn/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/loss.hpp"

namespace shrimpcnn {

void HyperParams::validate() const {
  if (epochs < 1) throw ParameterError("epochs must be at least 1");
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
  if (!(target_accuracy > 0.0 && target_accuracy < 1.0)) throw ParameterError("target accuracy must lie in (0, 1)");
  optimizer.validate();
}

std::vector<LabeledTensor> load_samples(std::span<const LabeledSample> samples, std::size_t input_size,
                                        const Preprocessing& prep, std::size_t threads) {
  std::vector<std::optional<LabeledTensor>> slots(samples.size());
  detail::parallel_for(samples.size(), threads, [&](std::size_t i) {
    const LabeledSample& s = samples[i];
    Image img = read_image(s.path);
    if (s.augmented) img = mirror_horizontal(img);
    slots[i] = LabeledTensor{preprocess_image(img, input_size, prep), s.label};
  });
  std::vector<LabeledTensor> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace {

// Forward passes for `indices` into a [n, classes] logits matrix.
Tensor batch_logits(const Model& model, std::span<const LabeledTensor> set, std::span<const std::size_t> indices,
                    std::vector<Model::Trace>* traces, std::size_t threads) {
  const std::size_t classes = model.config().class_count;
  Tensor logits({indices.size(), classes});
  detail::parallel_for(indices.size(), threads, [&](std::size_t i) {
    const Tensor row = traces != nullptr ? model.forward(set[indices[i]].input, (*traces)[i])
                                         : model.logits(set[indices[i]].input);
    std::copy_n(row.data(), classes, logits.data() + i * classes);
  });
  return logits;
}

Tensor row_softmax(const Tensor& logits) {
  const std::size_t n = logits.dim(0), classes = logits.dim(1);
  Tensor probs(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    Tensor row({classes});
    std::copy_n(logits.data() + i * classes, classes, row.data());
    const Tensor p = softmax(row);
    std::copy_n(p.data(), classes, probs.data() + i * classes);
  }
  return probs;
}

bool all_finite(const Tensor& t) {
  return std::all_of(t.values().begin(), t.values().end(), [](float v) { return std::isfinite(v); });
}

}  // namespace

Evaluation evaluate(const Model& model, std::span<const LabeledTensor> samples, std::size_t threads) {
  if (samples.empty()) throw ParameterError("cannot evaluate an empty sample list");
  std::vector<std::size_t> indices(samples.size());
  std::vector<int> labels(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    indices[i] = i;
    labels[i] = samples[i].label;
  }
  const Tensor logits = batch_logits(model, samples, indices, nullptr, threads);
  if (!all_finite(logits)) throw Error("model produced non-finite logits");
  const LossValue lv = scce_loss(row_softmax(logits), labels);
  Evaluation out;
  out.loss = lv.loss;
  out.correct = lv.correct_count;
  out.count = samples.size();
  out.accuracy = static_cast<double>(lv.correct_count) / static_cast<double>(samples.size());
  return out;
}

Evaluation evaluate(const Model& model, std::span<const LabeledSample> samples, std::size_t threads) {
  if (samples.empty()) throw ParameterError("cannot evaluate an empty sample list");
  const auto tensors = load_samples(samples, model.config().input_size, model.preprocessing(), threads);
  return evaluate(model, std::span<const LabeledTensor>(tensors), threads);
}

std::vector<EpochMetrics> train(Model& model, std::span<const LabeledTensor> train_set,
                                std::span<const LabeledTensor> validation_set, const HyperParams& hyper,
                                const EpochCallback& on_epoch) {
  hyper.validate();
  if (train_set.empty()) throw ParameterError("training partition is empty");
  if (validation_set.empty()) throw ParameterError("validation partition is empty");

  const std::vector<Tensor*> params = model.parameters();
  const std::vector<Shape> shapes = model.parameter_shapes();
  RmsPropState<float> state(hyper.optimizer, shapes);

  const std::size_t slots = std::min(hyper.batch_size, train_set.size());
  std::vector<Model::Trace> traces(slots);
  std::vector<std::vector<Tensor>> sample_grads(slots);
  std::vector<Tensor> batch_grad;
  for (const Shape& s : shapes) batch_grad.emplace_back(s);

  std::vector<EpochMetrics> history;
  history.reserve(hyper.epochs);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    const auto batches = make_batches(train_set.size(), hyper.batch_size, hyper.seed, epoch);
    double loss_sum = 0.0;
    std::size_t correct = 0;

    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& batch = batches[b];
      const std::size_t n = batch.size();
      std::vector<int> labels(n);
      for (std::size_t i = 0; i < n; ++i) labels[i] = train_set[batch[i]].label;

      const Tensor logits = batch_logits(model, train_set, batch, &traces, hyper.threads);
      if (!all_finite(logits)) throw TrainingDivergedError(epoch + 1, b + 1);
      const LossValue lv = scce_loss(row_softmax(logits), labels);
      if (!std::isfinite(lv.loss)) throw TrainingDivergedError(epoch + 1, b + 1);

      const Tensor grad_logits = softmax_scce_grad(logits, labels);
      const std::size_t classes = grad_logits.dim(1);
      detail::parallel_for(n, hyper.threads, [&](std::size_t i) {
        Tensor row({classes});
        std::copy_n(grad_logits.data() + i * classes, classes, row.data());
        model.backward(traces[i], row, sample_grads[i]);
      });

      // Fixed-order reduction over the batch.
      for (std::size_t p = 0; p < shapes.size(); ++p) {
        float* dst = batch_grad[p].data();
        const std::size_t len = batch_grad[p].size();
        std::copy_n(sample_grads[0][p].data(), len, dst);
        for (std::size_t i = 1; i < n; ++i) {
          const float* src = sample_grads[i][p].data();
          for (std::size_t k = 0; k < len; ++k) dst[k] += src[k];
        }
      }
      rmsprop_step<float>(params, batch_grad, state);

      loss_sum += lv.loss * static_cast<double>(n);
      correct += lv.correct_count;
    }

    const Evaluation val = evaluate(model, validation_set, hyper.threads);
    EpochMetrics m;
    m.epoch = epoch + 1;
    m.train_loss = loss_sum / static_cast<double>(train_set.size());
    m.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
    m.val_loss = val.loss;
    m.val_accuracy = val.accuracy;
    history.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return history;
}

std::vector<EpochMetrics> train(Model& model, const DatasetSplit& split, const HyperParams& hyper,
                                const EpochCallback& on_epoch) {
  if (split.train.empty() || split.validation.empty()) {
    throw ParameterError("both the training and validation partitions must be non-empty");
  }
  const std::size_t size = model.config().input_size;
  const auto train_set = load_samples(split.train, size, model.preprocessing(), hyper.threads);
  const auto val_set = load_samples(split.validation, size, model.preprocessing(), hyper.threads);
  return train(model, train_set, val_set, hyper, on_epoch);
}

Prediction predict(const Model& model, const Image& img, std::optional<bool> remove_background) {
  Preprocessing prep = model.preprocessing();
  if (remove_background) prep.remove_background = *remove_background;
  const Tensor probs = softmax(model.logits(preprocess_image(img, model.config().input_size, prep)));
  Prediction out;
  out.label = static_cast<int>(reduce_argmax(probs));
  out.probabilities.assign(probs.values().begin(), probs.values().end());
  return out;
}

Prediction predict(const Model& model, const std::filesystem::path& image_path,
                   std::optional<bool> remove_background) {
  return predict(model, read_image(image_path), remove_background);
}

}  // namespace shrimpcnn
