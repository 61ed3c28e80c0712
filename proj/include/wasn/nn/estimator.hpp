// wasn/nn/estimator.hpp
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

#ifndef WASN_NN_ESTIMATOR_HPP
#define WASN_NN_ESTIMATOR_HPP

#include <string>

#include "wasn/mask.hpp"
#include "wasn/nn/layers.hpp"

namespace wasn::nn {

// Missing-channel marker fed to the estimator in place of a broken link's
// magnitudes.
inline constexpr double kSentinel = -1e-7;

// Mask estimator: optional SE input gate, three 3x3 conv layers
// (batch norm, relu, 4x1 frequency max-pooling each), a temporal convolution
// aggregating the 21-frame context, and a sigmoid head with one unit per
// frequency bin.
struct EstimatorConfig {
  int in_channels = 7;  // 1 for the single-node variant
  int window_frames = 21;
  int bins = 257;
  std::vector<int> conv_filters = {32, 64, 64};
  int pool = 4;
  int tconv_width = 128;
  int tconv_kernel = 5;
  GateMode gate = GateMode::kNone;
  int se_reduction = 2;
  bool normalize_features = true;

  int pooled_bins() const;   // bins after all pooling stages
  int frame_features() const;  // conv output features per frame
  void validate() const;
};

// Per-channel standardization of log-magnitude features. Sentinel channels
// are written after standardization, so the marker value survives.
struct FeatureNorm {
  bool enabled = false;
  std::vector<double> mean, std;  // per channel

  void apply(double* window, int C, int T, int F) const;
};

struct EstimatorParams {
  EstimatorConfig cfg;
  SeGate se;  // used when gate_has_params(cfg.gate)
  std::vector<Conv2dLayer> convs;
  std::vector<BnLayer> bns;
  Conv1dLayer tconv;
  DenseLayer head;
  FeatureNorm norm;
  std::uint64_t init_seed = 0;

  void init(const EstimatorConfig& config, std::uint64_t seed);
  std::vector<ParamTensor*> parameters();
  void zero_grads();

  void save(const std::string& path) const;
  static EstimatorParams load(const std::string& path);
};

struct ForwardCache {
  SeCache se;
  Tensor rand_gate_w;  // kRandomWeights cache
  std::vector<Conv2dCache> conv;
  std::vector<BnCache> bn;
  std::vector<ReluCache> relu;
  std::vector<PoolCache> pool;
  Conv1dCache tconv;
  ReluCache tconv_relu;
  DenseCache head;
  SigmoidCache sig;
  int B = 0, T = 0;
};

// x: [B][C][T][F] feature windows (already standardized, sentinel applied).
// Returns mask windows [B][T][F] in (0,1). In training mode batch-norm uses
// batch statistics and updates running averages. gate_weights_out, when
// non-null, receives the applied per-window channel weights [B, C].
Tensor estimator_forward_batch(EstimatorParams& params, const Tensor& x, int B,
                               bool training, ForwardCache* cache,
                               Rng* override_rng, Tensor* gate_weights_out);

// Accumulates parameter gradients for d(loss)/d(mask windows) and returns the
// input gradient [B][C][T][F].
Tensor estimator_backward_batch(EstimatorParams& params, const ForwardCache& cache,
                                const Tensor& dmask);

// Single-window forward (the inference building block): x [C][21][F].
mask::TFMask estimator_forward(EstimatorParams& params, const Tensor& x,
                               Rng* override_rng = nullptr,
                               Tensor* gate_weights_out = nullptr);

// Replaces the channels of failed links with the sentinel constant. Layout
// [local, z_1, n~_1, ..., z_L, n~_L]; channel 0 is never touched.
void apply_sentinel(double* window, int C, int T, int F,
                    const std::vector<bool>& link_ok);

// log(1 + m) feature compression, in place.
void log_compress(double* values, std::size_t n);

// Sliding-window inference over a whole utterance: stride 1, the middle frame
// of each 21-frame window; the first/last 10 frames come from edge-clamped
// windows. mags is the raw magnitude stack [C][T][F]. gate_log, when given,
// collects the applied gate weights (one row per network invocation).
mask::TFMask infer_mask(EstimatorParams& params, const double* mags, int C, int T,
                        int F, const std::vector<bool>& link_ok,
                        std::uint64_t override_seed = 0,
                        Tensor* gate_log = nullptr);

}  // namespace wasn::nn

#endif  // WASN_NN_ESTIMATOR_HPP
