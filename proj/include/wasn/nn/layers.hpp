// wasn/nn/layers.hpp
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

#ifndef WASN_NN_LAYERS_HPP
#define WASN_NN_LAYERS_HPP

#include <cstdint>
#include <optional>

#include "wasn/nn/tensor.hpp"
#include "wasn/rng.hpp"

// Building blocks of the mask estimator. Activations travel position-major:
// a batch of B windows of spatial extent T x F with C channels is a
// [B*T*F, C] matrix whose row order is (b, t, f). Forward functions take an
// optional cache; backward functions consume it and accumulate parameter
// gradients.

namespace wasn::nn {

// How the per-channel input weights are produced (squeeze-and-excitation or
// the ablation overrides).
enum class GateMode {
  kNone,           // no input gating
  kSe,             // SE attention weights
  kSeOnes,         // SE branch present, weights forced to 1
  kSeRandom,       // SE branch present, weights drawn uniform(0,1)
  kRandomWeights,  // no SE branch, random weights applied directly
};

bool gate_has_params(GateMode mode);
// True when the applied weights depend on the window content (forces
// window-by-window inference).
bool gate_is_input_dependent(GateMode mode);

// ---- squeeze-and-excitation gate ----

struct SeGate {
  int channels = 0;
  int hidden = 0;  // max(1, channels / reduction)
  ParamTensor W1;  // [hidden, channels]
  ParamTensor b1;  // [hidden]
  ParamTensor W2;  // [channels, hidden]
  ParamTensor b2;  // [channels]

  void init(int channels, int reduction, Rng& rng);
};

struct SeCache {
  Tensor x;         // input copy [B*P, C]
  Tensor s;         // [B, C] channel means
  Tensor h;         // [B, hidden] post-relu
  Tensor w;         // [B, C] applied weights
  Tensor w_sig;     // [B, C] sigmoid output (pre-override)
  bool overridden = false;
  int batch = 0;
  int positions = 0;  // P = T*F per window
};

// y[p,c] = w[b,c] * x[p,c]; weights per window. `weights_out`, when given,
// receives the applied weights [B, C].
Tensor se_forward(const SeGate& gate, const Tensor& x, int batch, int positions,
                  GateMode mode, Rng* override_rng, SeCache* cache,
                  Tensor* weights_out);
Tensor se_backward(SeGate& gate, const SeCache& cache, const Tensor& dy);

// Input gating without an SE branch (rand-MN): random per-window weights.
Tensor weight_gate_forward(const Tensor& x, int batch, int positions, Rng& rng,
                           Tensor* weights_cache, Tensor* weights_out);
Tensor weight_gate_backward(const Tensor& weights, int batch, int positions,
                            const Tensor& dy);

// ---- 3x3 conv over (T, F), stride 1, zero same-padding ----

struct Conv2dLayer {
  int cin = 0, cout = 0;
  ParamTensor W;  // [9*cin, cout], column order (dt, df, cin)
  ParamTensor b;  // [cout]

  void init(int cin, int cout, Rng& rng);
};

struct Conv2dCache {
  Tensor col;  // [B*T*F, 9*cin]
  int B = 0, T = 0, F = 0;
};

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& x, int B, int T,
                      int F, Conv2dCache* cache);
Tensor conv2d_backward(Conv2dLayer& layer, const Conv2dCache& cache,
                       const Tensor& dy);

// ---- batch normalization over rows, per channel ----

struct BnLayer {
  int channels = 0;
  ParamTensor gamma, beta;
  Tensor run_mean, run_var;  // inference statistics
  double eps = 1e-5;
  double momentum = 0.1;  // fraction of the batch statistic blended in

  void init(int channels);
};

struct BnCache {
  Tensor xhat;  // [N, C]
  Tensor istd;  // [C]
  Tensor xc;    // [N, C] centered input
};

Tensor bn_forward(BnLayer& layer, const Tensor& x, bool training, BnCache* cache);
Tensor bn_backward(BnLayer& layer, const BnCache& cache, const Tensor& dy);

// ---- relu ----

struct ReluCache {
  std::vector<std::uint8_t> on;
};

Tensor relu_forward(const Tensor& x, ReluCache* cache);
Tensor relu_backward(const ReluCache& cache, const Tensor& dy);

// ---- max pooling over the frequency axis ----

struct PoolCache {
  std::vector<std::int32_t> argmax;  // source f per output element
  int B = 0, T = 0, F = 0, C = 0, pool = 0;
};

Tensor maxpool_f_forward(const Tensor& x, int B, int T, int F, int C, int pool,
                         PoolCache* cache);
Tensor maxpool_f_backward(const PoolCache& cache, const Tensor& dy);

// ---- 1-D conv over the time axis (per window), same padding ----

struct Conv1dLayer {
  int din = 0, dout = 0, kernel = 0;
  ParamTensor W;  // [kernel*din, dout], column order (dt, din)
  ParamTensor b;  // [dout]

  void init(int din, int dout, int kernel, Rng& rng);
};

struct Conv1dCache {
  Tensor row;  // [B*T, kernel*din]
  int B = 0, T = 0;
};

Tensor conv1d_forward(const Conv1dLayer& layer, const Tensor& x, int B, int T,
                      Conv1dCache* cache);
Tensor conv1d_backward(Conv1dLayer& layer, const Conv1dCache& cache,
                       const Tensor& dy);

// ---- dense ----

struct DenseLayer {
  int din = 0, dout = 0;
  ParamTensor W;  // [din, dout]
  ParamTensor b;  // [dout]

  void init(int din, int dout, Rng& rng);
};

struct DenseCache {
  Tensor x;
};

Tensor dense_forward(const DenseLayer& layer, const Tensor& x, DenseCache* cache);
Tensor dense_backward(DenseLayer& layer, const DenseCache& cache, const Tensor& dy);

// ---- sigmoid ----

struct SigmoidCache {
  Tensor y;
};

Tensor sigmoid_forward(const Tensor& x, SigmoidCache* cache);
Tensor sigmoid_backward(const SigmoidCache& cache, const Tensor& dy);

}  // namespace wasn::nn

#endif  // WASN_NN_LAYERS_HPP
