// nn/train.cpp
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

#include "wasn/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace wasn::nn {

void TrainResult::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < epoch_loss.size(); ++e)
    out << e << "," << epoch_loss[e] << "\n";
}

FeatureNorm compute_feature_norm(const WindowDataset& data, bool enabled) {
  FeatureNorm norm;
  norm.enabled = enabled;
  const int C = data.channels;
  norm.mean.assign(C, 0.0);
  norm.std.assign(C, 1.0);
  if (!enabled || data.count() == 0) return norm;

  const std::size_t per = static_cast<std::size_t>(data.frames) * data.bins;
  const std::size_t n_win = data.count();
  std::vector<double> sum(C, 0.0), sum_sq(C, 0.0);
  for (std::size_t i = 0; i < n_win; ++i) {
    const double* w = data.window(i);
    for (int c = 0; c < C; ++c) {
      const double* p = w + c * per;
      for (std::size_t k = 0; k < per; ++k) {
        sum[c] += p[k];
        sum_sq[c] += p[k] * p[k];
      }
    }
  }
  const double n = static_cast<double>(n_win) * per;
  for (int c = 0; c < C; ++c) {
    norm.mean[c] = sum[c] / n;
    const double var = std::max(0.0, sum_sq[c] / n - norm.mean[c] * norm.mean[c]);
    norm.std[c] = std::sqrt(var) > 1e-12 ? std::sqrt(var) : 1.0;
  }
  return norm;
}

TrainResult train(EstimatorParams& params, const WindowDataset& data,
                  const TrainConfig& cfg) {
  if (data.count() == 0) throw TrainingError("empty dataset");
  const EstimatorConfig& net = params.cfg;
  if (data.channels != net.in_channels || data.frames != net.window_frames ||
      data.bins != net.bins)
    throw ShapeError("dataset window shape does not match the estimator");

  params.norm = compute_feature_norm(data, net.normalize_features);

  const int C = data.channels;
  const int T = data.frames;
  const int F = data.bins;
  const int links = C > 1 ? (C - 1) / 2 : 0;
  const std::size_t wsize = data.window_size();
  const std::size_t tsize = data.target_size();

  Rng order_rng(mix_seed(cfg.seed, 0x0bdeULL));
  Rng link_rng(mix_seed(cfg.seed, 0x11f4ULL));
  Rng gate_rng(mix_seed(cfg.seed, 0x6a7eULL));

  std::vector<std::size_t> index(data.count());
  std::iota(index.begin(), index.end(), 0);

  auto params_list = params.parameters();

  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    order_rng.shuffle(index);
    double epoch_loss = 0.0;
    std::size_t seen = 0;

    for (std::size_t pos = 0; pos < index.size(); pos += cfg.batch_size) {
      const int B =
          static_cast<int>(std::min<std::size_t>(cfg.batch_size, index.size() - pos));
      Tensor x({B, C, T, F});
      Tensor target({B, T, F});
      for (int b = 0; b < B; ++b) {
        const std::size_t i = index[pos + b];
        double* xb = x.ptr() + static_cast<std::size_t>(b) * wsize;
        std::copy(data.window(i), data.window(i) + wsize, xb);
        params.norm.apply(xb, C, T, F);
        if (links > 0 && cfg.broken_links_max > 0) {
          const int n_broken = link_rng.int_in(cfg.broken_links_min,
                                               cfg.broken_links_max);
          std::vector<bool> ok(links, true);
          // choose n_broken distinct links
          std::vector<int> ids(links);
          std::iota(ids.begin(), ids.end(), 0);
          link_rng.shuffle(ids);
          for (int d = 0; d < n_broken; ++d) ok[ids[d]] = false;
          apply_sentinel(xb, C, T, F, ok);
        }
        std::copy(data.target(i), data.target(i) + tsize,
                  target.ptr() + static_cast<std::size_t>(b) * tsize);
      }

      ForwardCache cache;
      Tensor m = estimator_forward_batch(params, x, B, /*training=*/true, &cache,
                                         &gate_rng, nullptr);

      double loss = 0.0;
      Tensor dm({B, T, F});
      const double inv = 1.0 / static_cast<double>(m.numel());
      for (std::size_t i = 0; i < m.numel(); ++i) {
        const double diff = m.data[i] - target.data[i];
        loss += diff * diff;
        dm.data[i] = 2.0 * diff * inv;
      }
      loss *= inv;
      if (!std::isfinite(loss))
        throw TrainingError("loss diverged at epoch " + std::to_string(epoch));
      epoch_loss += loss * B;
      seen += B;

      params.zero_grads();
      estimator_backward_batch(params, cache, dm);

      for (ParamTensor* p : params_list) {
        for (std::size_t i = 0; i < p->value.numel(); ++i) {
          p->vel.data[i] =
              cfg.momentum * p->vel.data[i] - cfg.lr * p->grad.data[i];
          p->value.data[i] += p->vel.data[i];
        }
      }
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(seen));
  }
  return result;
}

}  // namespace wasn::nn
