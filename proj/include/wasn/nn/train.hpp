// wasn/nn/train.hpp
//
// Copyright 2026  The wasn-enhance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WASN_NN_TRAIN_HPP
#define WASN_NN_TRAIN_HPP

#include <string>

#include "wasn/nn/estimator.hpp"

namespace wasn::nn {

// MSE against the ideal ratio mask, SGD with momentum, deterministic given
// the seed. Broken links are drawn per sample and epoch.
struct TrainConfig {
  double lr = 0.05;
  double momentum = 0.9;
  int batch_size = 8;
  int epochs = 8;
  std::uint64_t seed = 1;
  int broken_links_min = 0;
  int broken_links_max = 0;
};

// Feature windows: log-magnitudes, NOT yet standardized (the trainer computes
// the standardization statistics and stores them in the model).
struct WindowDataset {
  int channels = 0, frames = 0, bins = 0;
  std::vector<double> features;  // [N][C][T][F]
  std::vector<double> targets;   // [N][T][F]

  std::size_t window_size() const {
    return static_cast<std::size_t>(channels) * frames * bins;
  }
  std::size_t target_size() const {
    return static_cast<std::size_t>(frames) * bins;
  }
  std::size_t count() const {
    return window_size() == 0 ? 0 : features.size() / window_size();
  }
  const double* window(std::size_t i) const {
    return features.data() + i * window_size();
  }
  const double* target(std::size_t i) const {
    return targets.data() + i * target_size();
  }
};

struct TrainResult {
  std::vector<double> epoch_loss;
  void save_csv(const std::string& path) const;
};

TrainResult train(EstimatorParams& params, const WindowDataset& data,
                  const TrainConfig& cfg);

// Per-channel mean/std of the dataset's features (standardization stats).
FeatureNorm compute_feature_norm(const WindowDataset& data, bool enabled);

}  // namespace wasn::nn

#endif  // WASN_NN_TRAIN_HPP
