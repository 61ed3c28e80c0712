// nn/layers.cpp
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

#include "wasn/nn/layers.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "wasn/kernels.hpp"

namespace wasn::nn {

bool gate_has_params(GateMode mode) {
  return mode == GateMode::kSe || mode == GateMode::kSeOnes ||
         mode == GateMode::kSeRandom;
}

bool gate_is_input_dependent(GateMode mode) {
  // kSeOnes multiplies by exactly 1, kNone does nothing; both admit
  // whole-utterance inference. Random weights are drawn per window.
  return mode == GateMode::kSe || mode == GateMode::kSeRandom ||
         mode == GateMode::kRandomWeights;
}

namespace {

double he_std(int fan_in) { return std::sqrt(2.0 / fan_in); }

void init_normal(Tensor& t, double std, Rng& rng) {
  for (double& v : t.data) v = std * rng.normal();
}

void init_uniform(Tensor& t, double limit, Rng& rng) {
  for (double& v : t.data) v = rng.uniform(-limit, limit);
}

}  // namespace

// ---- SE gate ----

void SeGate::init(int c, int reduction, Rng& rng) {
  channels = c;
  hidden = std::max(1, c / reduction);
  W1.init_shape({hidden, channels});
  b1.init_shape({hidden});
  W2.init_shape({channels, hidden});
  b2.init_shape({channels});
  const double l1 = std::sqrt(6.0 / (channels + hidden));
  init_uniform(W1.value, l1, rng);
  init_uniform(W2.value, l1, rng);
}

Tensor se_forward(const SeGate& gate, const Tensor& x, int batch, int positions,
                  GateMode mode, Rng* override_rng, SeCache* cache,
                  Tensor* weights_out) {
  const int C = gate.channels;
  const int H = gate.hidden;
  const std::size_t rows = static_cast<std::size_t>(batch) * positions;
  if (x.numel() != rows * C) throw ShapeError("se_forward: bad input size");
  for (double v : x.data)
    if (!std::isfinite(v)) throw NumericError("se_forward: non-finite input");

  Tensor s({batch, C});
  for (int b = 0; b < batch; ++b) {
    const double* xb = x.ptr() + static_cast<std::size_t>(b) * positions * C;
    for (int p = 0; p < positions; ++p)
      for (int c = 0; c < C; ++c) s.at2(b, c) += xb[p * C + c];
    for (int c = 0; c < C; ++c) s.at2(b, c) /= positions;
  }

  Tensor h({batch, H});
  for (int b = 0; b < batch; ++b)
    for (int i = 0; i < H; ++i) {
      double a = gate.b1.value.data[i];
      a += kern::dot(gate.W1.value.ptr() + static_cast<std::size_t>(i) * C,
                     s.ptr() + static_cast<std::size_t>(b) * C, C);
      h.at2(b, i) = a > 0.0 ? a : 0.0;
    }

  Tensor w_sig({batch, C});
  for (int b = 0; b < batch; ++b)
    for (int c = 0; c < C; ++c) {
      double a = gate.b2.value.data[c];
      a += kern::dot(gate.W2.value.ptr() + static_cast<std::size_t>(c) * H,
                     h.ptr() + static_cast<std::size_t>(b) * H, H);
      w_sig.at2(b, c) = 1.0 / (1.0 + std::exp(-a));
    }

  Tensor w = w_sig;
  bool overridden = false;
  if (mode == GateMode::kSeOnes) {
    w.fill(1.0);
    overridden = true;
  } else if (mode == GateMode::kSeRandom) {
    if (!override_rng) throw ConfigError("random gate override needs an rng");
    for (double& v : w.data) v = override_rng->uniform();
    overridden = true;
  }

  Tensor y({batch * positions, C});
  for (int b = 0; b < batch; ++b) {
    const double* xb = x.ptr() + static_cast<std::size_t>(b) * positions * C;
    double* yb = y.ptr() + static_cast<std::size_t>(b) * positions * C;
    const double* wb = &w.at2(b, 0);
    for (int p = 0; p < positions; ++p)
      for (int c = 0; c < C; ++c) yb[p * C + c] = wb[c] * xb[p * C + c];
  }

  if (cache) {
    cache->x = x;
    cache->s = std::move(s);
    cache->h = std::move(h);
    cache->w_sig = std::move(w_sig);
    cache->w = w;
    cache->overridden = overridden;
    cache->batch = batch;
    cache->positions = positions;
  }
  if (weights_out) *weights_out = w;
  return y;
}

Tensor se_backward(SeGate& gate, const SeCache& cache, const Tensor& dy) {
  const int B = cache.batch, P = cache.positions;
  const int C = gate.channels, H = gate.hidden;

  Tensor dx({B * P, C});
  for (int b = 0; b < B; ++b) {
    const double* dyb = dy.ptr() + static_cast<std::size_t>(b) * P * C;
    double* dxb = dx.ptr() + static_cast<std::size_t>(b) * P * C;
    const double* wb = &cache.w.data[static_cast<std::size_t>(b) * C];
    for (int p = 0; p < P; ++p)
      for (int c = 0; c < C; ++c) dxb[p * C + c] = wb[c] * dyb[p * C + c];
  }
  if (cache.overridden) return dx;  // constant weights: no gate/squeeze path

  for (int b = 0; b < B; ++b) {
    const double* dyb = dy.ptr() + static_cast<std::size_t>(b) * P * C;
    const double* xb = cache.x.ptr() + static_cast<std::size_t>(b) * P * C;

    // dL/dw (per window), then back through sigmoid
    std::vector<double> dw(C, 0.0);
    for (int p = 0; p < P; ++p)
      for (int c = 0; c < C; ++c) dw[c] += dyb[p * C + c] * xb[p * C + c];
    std::vector<double> dwraw(C);
    for (int c = 0; c < C; ++c) {
      const double wv = cache.w_sig.data[static_cast<std::size_t>(b) * C + c];
      dwraw[c] = dw[c] * wv * (1.0 - wv);
    }

    // excite layer 2
    std::vector<double> dh(H, 0.0);
    for (int c = 0; c < C; ++c) {
      const double g = dwraw[c];
      gate.b2.grad.data[c] += g;
      for (int i = 0; i < H; ++i) {
        gate.W2.grad.at2(c, i) += g * cache.h.at2(b, i);
        dh[i] += g * gate.W2.value.at2(c, i);
      }
    }
    // relu
    for (int i = 0; i < H; ++i)
      if (cache.h.at2(b, i) <= 0.0) dh[i] = 0.0;

    // excite layer 1, then squeeze path to the input
    std::vector<double> ds(C, 0.0);
    for (int i = 0; i < H; ++i) {
      const double g = dh[i];
      if (g == 0.0) continue;
      gate.b1.grad.data[i] += g;
      for (int c = 0; c < C; ++c) {
        gate.W1.grad.at2(i, c) += g * cache.s.at2(b, c);
        ds[c] += g * gate.W1.value.at2(i, c);
      }
    }
    double* dxb = dx.ptr() + static_cast<std::size_t>(b) * P * C;
    for (int c = 0; c < C; ++c) {
      const double add = ds[c] / P;
      if (add == 0.0) continue;
      for (int p = 0; p < P; ++p) dxb[p * C + c] += add;
    }
  }
  return dx;
}

Tensor weight_gate_forward(const Tensor& x, int batch, int positions, Rng& rng,
                           Tensor* weights_cache, Tensor* weights_out) {
  const int C = static_cast<int>(x.numel() / (static_cast<std::size_t>(batch) * positions));
  Tensor w({batch, C});
  for (double& v : w.data) v = rng.uniform();
  Tensor y({batch * positions, C});
  for (int b = 0; b < batch; ++b) {
    const double* xb = x.ptr() + static_cast<std::size_t>(b) * positions * C;
    double* yb = y.ptr() + static_cast<std::size_t>(b) * positions * C;
    const double* wb = &w.at2(b, 0);
    for (int p = 0; p < positions; ++p)
      for (int c = 0; c < C; ++c) yb[p * C + c] = wb[c] * xb[p * C + c];
  }
  if (weights_out) *weights_out = w;
  if (weights_cache) *weights_cache = std::move(w);
  return y;
}

Tensor weight_gate_backward(const Tensor& weights, int batch, int positions,
                            const Tensor& dy) {
  const int C = weights.shape[1];
  Tensor dx({batch * positions, C});
  for (int b = 0; b < batch; ++b) {
    const double* dyb = dy.ptr() + static_cast<std::size_t>(b) * positions * C;
    double* dxb = dx.ptr() + static_cast<std::size_t>(b) * positions * C;
    const double* wb = &weights.data[static_cast<std::size_t>(b) * C];
    for (int p = 0; p < positions; ++p)
      for (int c = 0; c < C; ++c) dxb[p * C + c] = wb[c] * dyb[p * C + c];
  }
  return dx;
}

// ---- conv2d ----

void Conv2dLayer::init(int in, int out, Rng& rng) {
  cin = in;
  cout = out;
  W.init_shape({9 * cin, cout});
  b.init_shape({cout});
  init_normal(W.value, he_std(9 * cin), rng);
}

namespace {

// Gathers 3x3 neighborhoods; column order (dt, df, cin). Windows are padded
// independently, so batched and whole-signal calls produce identical rows
// for interior positions.
void im2col_3x3(const Tensor& x, int B, int T, int F, int C, Tensor& col) {
  const std::size_t cols = static_cast<std::size_t>(9) * C;
  for (int b = 0; b < B; ++b) {
    for (int t = 0; t < T; ++t) {
      for (int f = 0; f < F; ++f) {
        double* row =
            col.ptr() + ((static_cast<std::size_t>(b) * T + t) * F + f) * cols;
        int off = 0;
        for (int dt = -1; dt <= 1; ++dt) {
          const int tt = t + dt;
          for (int df = -1; df <= 1; ++df) {
            const int ff = f + df;
            if (tt < 0 || tt >= T || ff < 0 || ff >= F) {
              std::memset(row + off, 0, sizeof(double) * C);
            } else {
              const double* src =
                  x.ptr() + ((static_cast<std::size_t>(b) * T + tt) * F + ff) * C;
              std::memcpy(row + off, src, sizeof(double) * C);
            }
            off += C;
          }
        }
      }
    }
  }
}

void col2im_3x3(const Tensor& dcol, int B, int T, int F, int C, Tensor& dx) {
  const std::size_t cols = static_cast<std::size_t>(9) * C;
  dx.zero();
  for (int b = 0; b < B; ++b) {
    for (int t = 0; t < T; ++t) {
      for (int f = 0; f < F; ++f) {
        const double* row =
            dcol.ptr() + ((static_cast<std::size_t>(b) * T + t) * F + f) * cols;
        int off = 0;
        for (int dt = -1; dt <= 1; ++dt) {
          const int tt = t + dt;
          for (int df = -1; df <= 1; ++df) {
            const int ff = f + df;
            if (tt >= 0 && tt < T && ff >= 0 && ff < F) {
              double* dst =
                  dx.ptr() + ((static_cast<std::size_t>(b) * T + tt) * F + ff) * C;
              for (int c = 0; c < C; ++c) dst[c] += row[off + c];
            }
            off += C;
          }
        }
      }
    }
  }
}

}  // namespace

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& x, int B, int T,
                      int F, Conv2dCache* cache) {
  const int rows = B * T * F;
  if (x.numel() != static_cast<std::size_t>(rows) * layer.cin)
    throw ShapeError("conv2d_forward: bad input size");
  Tensor col({rows, 9 * layer.cin});
  im2col_3x3(x, B, T, F, layer.cin, col);

  Tensor y({rows, layer.cout});
  for (int r = 0; r < rows; ++r)
    std::memcpy(&y.at2(r, 0), layer.b.value.ptr(), sizeof(double) * layer.cout);
  kern::gemm_nn(col.ptr(), layer.W.value.ptr(), y.ptr(), rows, 9 * layer.cin,
                layer.cout);
  if (cache) {
    cache->col = std::move(col);
    cache->B = B;
    cache->T = T;
    cache->F = F;
  }
  return y;
}

Tensor conv2d_backward(Conv2dLayer& layer, const Conv2dCache& cache,
                       const Tensor& dy) {
  const int rows = cache.B * cache.T * cache.F;
  const int K = 9 * layer.cin;
  // dW += col^T dy ; db += column sums of dy
  kern::gemm_tn(cache.col.ptr(), dy.ptr(), layer.W.grad.ptr(), rows, K,
                layer.cout);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < layer.cout; ++c) layer.b.grad.data[c] += dy.at2(r, c);

  Tensor dcol({rows, K});
  kern::gemm_nt(dy.ptr(), layer.W.value.ptr(), dcol.ptr(), rows, layer.cout, K);
  Tensor dx({rows, layer.cin});
  col2im_3x3(dcol, cache.B, cache.T, cache.F, layer.cin, dx);
  return dx;
}

// ---- batch norm ----

void BnLayer::init(int c) {
  channels = c;
  gamma.init_shape({c});
  beta.init_shape({c});
  gamma.value.fill(1.0);
  run_mean = Tensor({c});
  run_var = Tensor({c});
  run_var.fill(1.0);
}

Tensor bn_forward(BnLayer& layer, const Tensor& x, bool training, BnCache* cache) {
  const int C = layer.channels;
  const int N = static_cast<int>(x.numel() / C);
  Tensor y({N, C});

  if (!training) {
    for (int c = 0; c < C; ++c) {
      const double istd = 1.0 / std::sqrt(layer.run_var.data[c] + layer.eps);
      const double g = layer.gamma.value.data[c] * istd;
      const double off = layer.beta.value.data[c] - g * layer.run_mean.data[c];
      for (int r = 0; r < N; ++r) y.at2(r, c) = g * x.at2(r, c) + off;
    }
    return y;
  }

  std::vector<double> mean(C, 0.0), var(C, 0.0);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < C; ++c) mean[c] += x.at2(r, c);
  for (int c = 0; c < C; ++c) mean[c] /= N;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < C; ++c) {
      const double d = x.at2(r, c) - mean[c];
      var[c] += d * d;
    }
  for (int c = 0; c < C; ++c) var[c] /= N;

  Tensor xhat({N, C}), xc({N, C}), istd({C});
  for (int c = 0; c < C; ++c) istd.data[c] = 1.0 / std::sqrt(var[c] + layer.eps);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < C; ++c) {
      const double d = x.at2(r, c) - mean[c];
      xc.at2(r, c) = d;
      const double xh = d * istd.data[c];
      xhat.at2(r, c) = xh;
      y.at2(r, c) = layer.gamma.value.data[c] * xh + layer.beta.value.data[c];
    }

  for (int c = 0; c < C; ++c) {
    layer.run_mean.data[c] =
        (1.0 - layer.momentum) * layer.run_mean.data[c] + layer.momentum * mean[c];
    layer.run_var.data[c] =
        (1.0 - layer.momentum) * layer.run_var.data[c] + layer.momentum * var[c];
  }

  if (cache) {
    cache->xhat = std::move(xhat);
    cache->istd = std::move(istd);
    cache->xc = std::move(xc);
  }
  return y;
}

Tensor bn_backward(BnLayer& layer, const BnCache& cache, const Tensor& dy) {
  const int C = layer.channels;
  const int N = static_cast<int>(dy.numel() / C);
  Tensor dx({N, C});

  for (int c = 0; c < C; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int r = 0; r < N; ++r) {
      sum_dy += dy.at2(r, c);
      sum_dy_xhat += dy.at2(r, c) * cache.xhat.at2(r, c);
    }
    layer.beta.grad.data[c] += sum_dy;
    layer.gamma.grad.data[c] += sum_dy_xhat;

    const double g = layer.gamma.value.data[c];
    const double istd = cache.istd.data[c];
    const double inv_n = 1.0 / N;
    for (int r = 0; r < N; ++r) {
      // dx = gamma * istd / N * (N dy - sum(dy) - xhat * sum(dy xhat))
      dx.at2(r, c) = g * istd * inv_n *
                     (N * dy.at2(r, c) - sum_dy -
                      cache.xhat.at2(r, c) * sum_dy_xhat);
    }
  }
  return dx;
}

// ---- relu ----

Tensor relu_forward(const Tensor& x, ReluCache* cache) {
  Tensor y = x;
  if (cache) cache->on.assign(x.numel(), 0);
  for (std::size_t i = 0; i < y.numel(); ++i) {
    if (y.data[i] > 0.0) {
      if (cache) cache->on[i] = 1;
    } else {
      y.data[i] = 0.0;
    }
  }
  return y;
}

Tensor relu_backward(const ReluCache& cache, const Tensor& dy) {
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.numel(); ++i)
    if (!cache.on[i]) dx.data[i] = 0.0;
  return dx;
}

// ---- max pool over frequency ----

Tensor maxpool_f_forward(const Tensor& x, int B, int T, int F, int C, int pool,
                         PoolCache* cache) {
  const int Fp = F / pool;
  if (Fp < 1) throw ShapeError("maxpool: pooled width would be zero");
  Tensor y({B * T * Fp, C});
  if (cache) {
    cache->argmax.assign(y.numel(), 0);
    cache->B = B;
    cache->T = T;
    cache->F = F;
    cache->C = C;
    cache->pool = pool;
  }
  for (int b = 0; b < B; ++b)
    for (int t = 0; t < T; ++t)
      for (int fp = 0; fp < Fp; ++fp) {
        const std::size_t orow = (static_cast<std::size_t>(b) * T + t) * Fp + fp;
        for (int c = 0; c < C; ++c) {
          double best = -std::numeric_limits<double>::infinity();
          int best_f = fp * pool;
          for (int f = fp * pool; f < (fp + 1) * pool; ++f) {
            const double v =
                x.data[((static_cast<std::size_t>(b) * T + t) * F + f) * C + c];
            if (v > best) {
              best = v;
              best_f = f;
            }
          }
          y.data[orow * C + c] = best;
          if (cache) cache->argmax[orow * C + c] = best_f;
        }
      }
  return y;
}

Tensor maxpool_f_backward(const PoolCache& cache, const Tensor& dy) {
  const int B = cache.B, T = cache.T, F = cache.F, C = cache.C;
  const int Fp = F / cache.pool;
  Tensor dx({B * T * F, C});
  for (int b = 0; b < B; ++b)
    for (int t = 0; t < T; ++t)
      for (int fp = 0; fp < Fp; ++fp) {
        const std::size_t orow = (static_cast<std::size_t>(b) * T + t) * Fp + fp;
        for (int c = 0; c < C; ++c) {
          const int f = cache.argmax[orow * C + c];
          dx.data[((static_cast<std::size_t>(b) * T + t) * F + f) * C + c] +=
              dy.data[orow * C + c];
        }
      }
  return dx;
}

// ---- conv1d ----

void Conv1dLayer::init(int in, int out, int k, Rng& rng) {
  din = in;
  dout = out;
  kernel = k;
  W.init_shape({k * din, dout});
  b.init_shape({dout});
  init_normal(W.value, he_std(k * din), rng);
}

namespace {

void im2row_1d(const Tensor& x, int B, int T, int D, int k, Tensor& row) {
  const int half = k / 2;
  const std::size_t cols = static_cast<std::size_t>(k) * D;
  for (int b = 0; b < B; ++b)
    for (int t = 0; t < T; ++t) {
      double* r = row.ptr() + (static_cast<std::size_t>(b) * T + t) * cols;
      for (int dt = 0; dt < k; ++dt) {
        const int tt = t + dt - half;
        if (tt < 0 || tt >= T) {
          std::memset(r + dt * D, 0, sizeof(double) * D);
        } else {
          std::memcpy(r + dt * D,
                      x.ptr() + (static_cast<std::size_t>(b) * T + tt) * D,
                      sizeof(double) * D);
        }
      }
    }
}

}  // namespace

Tensor conv1d_forward(const Conv1dLayer& layer, const Tensor& x, int B, int T,
                      Conv1dCache* cache) {
  const int rows = B * T;
  if (x.numel() != static_cast<std::size_t>(rows) * layer.din)
    throw ShapeError("conv1d_forward: bad input size");
  Tensor row({rows, layer.kernel * layer.din});
  im2row_1d(x, B, T, layer.din, layer.kernel, row);
  Tensor y({rows, layer.dout});
  for (int r = 0; r < rows; ++r)
    std::memcpy(&y.at2(r, 0), layer.b.value.ptr(), sizeof(double) * layer.dout);
  kern::gemm_nn(row.ptr(), layer.W.value.ptr(), y.ptr(), rows,
                layer.kernel * layer.din, layer.dout);
  if (cache) {
    cache->row = std::move(row);
    cache->B = B;
    cache->T = T;
  }
  return y;
}

Tensor conv1d_backward(Conv1dLayer& layer, const Conv1dCache& cache,
                       const Tensor& dy) {
  const int rows = cache.B * cache.T;
  const int K = layer.kernel * layer.din;
  kern::gemm_tn(cache.row.ptr(), dy.ptr(), layer.W.grad.ptr(), rows, K,
                layer.dout);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < layer.dout; ++c) layer.b.grad.data[c] += dy.at2(r, c);

  Tensor drow({rows, K});
  kern::gemm_nt(dy.ptr(), layer.W.value.ptr(), drow.ptr(), rows, layer.dout, K);

  Tensor dx({rows, layer.din});
  const int half = layer.kernel / 2;
  for (int b = 0; b < cache.B; ++b)
    for (int t = 0; t < cache.T; ++t) {
      const double* r = drow.ptr() + (static_cast<std::size_t>(b) * cache.T + t) *
                                         static_cast<std::size_t>(K);
      for (int dt = 0; dt < layer.kernel; ++dt) {
        const int tt = t + dt - half;
        if (tt < 0 || tt >= cache.T) continue;
        double* dst =
            dx.ptr() + (static_cast<std::size_t>(b) * cache.T + tt) * layer.din;
        for (int d = 0; d < layer.din; ++d) dst[d] += r[dt * layer.din + d];
      }
    }
  return dx;
}

// ---- dense ----

void DenseLayer::init(int in, int out, Rng& rng) {
  din = in;
  dout = out;
  W.init_shape({din, dout});
  b.init_shape({dout});
  init_normal(W.value, he_std(din), rng);
}

Tensor dense_forward(const DenseLayer& layer, const Tensor& x, DenseCache* cache) {
  const int rows = static_cast<int>(x.numel() / layer.din);
  Tensor y({rows, layer.dout});
  for (int r = 0; r < rows; ++r)
    std::memcpy(&y.at2(r, 0), layer.b.value.ptr(), sizeof(double) * layer.dout);
  kern::gemm_nn(x.ptr(), layer.W.value.ptr(), y.ptr(), rows, layer.din, layer.dout);
  if (cache) cache->x = x;
  return y;
}

Tensor dense_backward(DenseLayer& layer, const DenseCache& cache, const Tensor& dy) {
  const int rows = static_cast<int>(dy.numel() / layer.dout);
  kern::gemm_tn(cache.x.ptr(), dy.ptr(), layer.W.grad.ptr(), rows, layer.din,
                layer.dout);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < layer.dout; ++c) layer.b.grad.data[c] += dy.at2(r, c);
  Tensor dx({rows, layer.din});
  kern::gemm_nt(dy.ptr(), layer.W.value.ptr(), dx.ptr(), rows, layer.dout,
                layer.din);
  return dx;
}

// ---- sigmoid ----

Tensor sigmoid_forward(const Tensor& x, SigmoidCache* cache) {
  Tensor y = x;
  for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
  if (cache) cache->y = y;
  return y;
}

Tensor sigmoid_backward(const SigmoidCache& cache, const Tensor& dy) {
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.numel(); ++i) {
    const double s = cache.y.data[i];
    dx.data[i] *= s * (1.0 - s);
  }
  return dx;
}

}  // namespace wasn::nn
