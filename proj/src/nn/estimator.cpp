// nn/estimator.cpp
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

#include "wasn/nn/estimator.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace wasn::nn {

int EstimatorConfig::pooled_bins() const {
  int f = bins;
  for (std::size_t i = 0; i < conv_filters.size(); ++i) f /= pool;
  return f;
}

int EstimatorConfig::frame_features() const {
  return conv_filters.back() * pooled_bins();
}

void EstimatorConfig::validate() const {
  if (in_channels < 1) throw ConfigError("in_channels must be >= 1");
  if (bins < 1 || window_frames < 1) throw ConfigError("bad window shape");
  if (conv_filters.empty()) throw ConfigError("need at least one conv layer");
  if (pool < 1) throw ConfigError("pool must be >= 1");
  int f = bins;
  for (std::size_t i = 0; i < conv_filters.size(); ++i) {
    f /= pool;
    if (f < 1) throw ConfigError("pooling collapses the frequency axis");
  }
  if (tconv_kernel % 2 == 0) throw ConfigError("tconv kernel must be odd");
  if (tconv_width < 1) throw ConfigError("tconv width must be >= 1");
  if (gate != GateMode::kNone && in_channels == 1)
    throw ConfigError("input gating is meaningless with a single channel");
}

void FeatureNorm::apply(double* window, int C, int T, int F) const {
  if (!enabled) return;
  if (static_cast<int>(mean.size()) != C || static_cast<int>(std.size()) != C)
    throw ShapeError("feature norm stats do not match channel count");
  const std::size_t per = static_cast<std::size_t>(T) * F;
  for (int c = 0; c < C; ++c) {
    const double mu = mean[c];
    const double sd = std[c] > 1e-12 ? std[c] : 1.0;
    double* p = window + c * per;
    for (std::size_t i = 0; i < per; ++i) p[i] = (p[i] - mu) / sd;
  }
}

void EstimatorParams::init(const EstimatorConfig& config, std::uint64_t seed) {
  config.validate();
  cfg = config;
  init_seed = seed;
  Rng rng(mix_seed(seed, 0x1217ULL));
  if (gate_has_params(cfg.gate)) se.init(cfg.in_channels, cfg.se_reduction, rng);
  convs.clear();
  bns.clear();
  int cin = cfg.in_channels;
  for (int cout : cfg.conv_filters) {
    Conv2dLayer conv;
    conv.init(cin, cout, rng);
    convs.push_back(std::move(conv));
    BnLayer bn;
    bn.init(cout);
    bns.push_back(std::move(bn));
    cin = cout;
  }
  tconv.init(cfg.frame_features(), cfg.tconv_width, cfg.tconv_kernel, rng);
  head.init(cfg.tconv_width, cfg.bins, rng);
  norm.enabled = cfg.normalize_features;
  norm.mean.assign(cfg.in_channels, 0.0);
  norm.std.assign(cfg.in_channels, 1.0);
}

std::vector<ParamTensor*> EstimatorParams::parameters() {
  std::vector<ParamTensor*> ps;
  if (gate_has_params(cfg.gate)) {
    ps.push_back(&se.W1);
    ps.push_back(&se.b1);
    ps.push_back(&se.W2);
    ps.push_back(&se.b2);
  }
  for (auto& c : convs) {
    ps.push_back(&c.W);
    ps.push_back(&c.b);
  }
  for (auto& b : bns) {
    ps.push_back(&b.gamma);
    ps.push_back(&b.beta);
  }
  ps.push_back(&tconv.W);
  ps.push_back(&tconv.b);
  ps.push_back(&head.W);
  ps.push_back(&head.b);
  return ps;
}

void EstimatorParams::zero_grads() {
  for (ParamTensor* p : parameters()) p->zero_grad();
}

namespace {

// [B][C][T][F] -> position-major [B*T*F, C]
Tensor to_positions(const Tensor& x, int B, int C, int T, int F) {
  Tensor out({B * T * F, C});
  const std::size_t per = static_cast<std::size_t>(T) * F;
  for (int b = 0; b < B; ++b) {
    const double* xb = x.ptr() + static_cast<std::size_t>(b) * C * per;
    double* ob = out.ptr() + static_cast<std::size_t>(b) * per * C;
    for (int c = 0; c < C; ++c)
      for (std::size_t p = 0; p < per; ++p) ob[p * C + c] = xb[c * per + p];
  }
  return out;
}

Tensor from_positions(const Tensor& xp, int B, int C, int T, int F) {
  Tensor out({B, C, T, F});
  const std::size_t per = static_cast<std::size_t>(T) * F;
  for (int b = 0; b < B; ++b) {
    const double* ib = xp.ptr() + static_cast<std::size_t>(b) * per * C;
    double* ob = out.ptr() + static_cast<std::size_t>(b) * C * per;
    for (int c = 0; c < C; ++c)
      for (std::size_t p = 0; p < per; ++p) ob[c * per + p] = ib[p * C + c];
  }
  return out;
}

std::string gate_name(GateMode m) {
  switch (m) {
    case GateMode::kNone: return "none";
    case GateMode::kSe: return "se";
    case GateMode::kSeOnes: return "se_ones";
    case GateMode::kSeRandom: return "se_random";
    case GateMode::kRandomWeights: return "random";
  }
  throw ConfigError("bad gate mode");
}

GateMode gate_from_name(const std::string& s) {
  if (s == "none") return GateMode::kNone;
  if (s == "se") return GateMode::kSe;
  if (s == "se_ones") return GateMode::kSeOnes;
  if (s == "se_random") return GateMode::kSeRandom;
  if (s == "random") return GateMode::kRandomWeights;
  throw ConfigError("unknown gate mode " + s);
}

}  // namespace

Tensor estimator_forward_batch(EstimatorParams& params, const Tensor& x, int B,
                               bool training, ForwardCache* cache,
                               Rng* override_rng, Tensor* gate_weights_out) {
  const EstimatorConfig& cfg = params.cfg;
  const int C = cfg.in_channels;
  const int F = cfg.bins;
  if (x.numel() % (static_cast<std::size_t>(B) * C * F) != 0)
    throw ShapeError("estimator input size does not factor into windows");
  const int T = static_cast<int>(x.numel() / (static_cast<std::size_t>(B) * C * F));
  const int P = T * F;

  if (cache) {
    cache->B = B;
    cache->T = T;
    cache->conv.resize(params.convs.size());
    cache->bn.resize(params.bns.size());
    cache->relu.resize(params.convs.size());
    cache->pool.resize(params.convs.size());
  }

  Tensor a = to_positions(x, B, C, T, F);

  if (cfg.gate == GateMode::kSe || cfg.gate == GateMode::kSeOnes ||
      cfg.gate == GateMode::kSeRandom) {
    a = se_forward(params.se, a, B, P, cfg.gate, override_rng,
                   cache ? &cache->se : nullptr, gate_weights_out);
  } else if (cfg.gate == GateMode::kRandomWeights) {
    if (!override_rng) throw ConfigError("random weight gate needs an rng");
    a = weight_gate_forward(a, B, P, *override_rng,
                            cache ? &cache->rand_gate_w : nullptr,
                            gate_weights_out);
  } else if (gate_weights_out) {
    *gate_weights_out = Tensor({B, C});
    gate_weights_out->fill(1.0);
  }

  int f_now = F;
  for (std::size_t l = 0; l < params.convs.size(); ++l) {
    a = conv2d_forward(params.convs[l], a, B, T, f_now,
                       cache ? &cache->conv[l] : nullptr);
    a = bn_forward(params.bns[l], a, training, cache ? &cache->bn[l] : nullptr);
    a = relu_forward(a, cache ? &cache->relu[l] : nullptr);
    a = maxpool_f_forward(a, B, T, f_now, params.convs[l].cout, cfg.pool,
                          cache ? &cache->pool[l] : nullptr);
    f_now /= cfg.pool;
  }

  // [B*T*f_now, C_last] rows are contiguous per frame: view as
  // [B*T, f_now*C_last] without copying.
  a.shape = {B * T, f_now * params.convs.back().cout};

  a = conv1d_forward(params.tconv, a, B, T, cache ? &cache->tconv : nullptr);
  a = relu_forward(a, cache ? &cache->tconv_relu : nullptr);
  a = dense_forward(params.head, a, cache ? &cache->head : nullptr);
  a = sigmoid_forward(a, cache ? &cache->sig : nullptr);
  a.shape = {B, T, F};
  return a;
}

Tensor estimator_backward_batch(EstimatorParams& params, const ForwardCache& cache,
                                const Tensor& dmask) {
  const EstimatorConfig& cfg = params.cfg;
  const int B = cache.B, T = cache.T;
  const int F = cfg.bins;

  Tensor d = dmask;
  d.shape = {B * T, F};
  d = sigmoid_backward(cache.sig, d);
  d = dense_backward(params.head, cache.head, d);
  d = relu_backward(cache.tconv_relu, d);
  d = conv1d_backward(params.tconv, cache.tconv, d);

  int f_now = cfg.pooled_bins();
  d.shape = {B * T * f_now, params.convs.back().cout};
  for (int l = static_cast<int>(params.convs.size()) - 1; l >= 0; --l) {
    d = maxpool_f_backward(cache.pool[l], d);
    d = relu_backward(cache.relu[l], d);
    d = bn_backward(params.bns[l], cache.bn[l], d);
    d = conv2d_backward(params.convs[l], cache.conv[l], d);
    f_now *= cfg.pool;
  }

  const int P = T * F;
  if (cfg.gate == GateMode::kSe || cfg.gate == GateMode::kSeOnes ||
      cfg.gate == GateMode::kSeRandom) {
    d = se_backward(params.se, cache.se, d);
  } else if (cfg.gate == GateMode::kRandomWeights) {
    d = weight_gate_backward(cache.rand_gate_w, B, P, d);
  }
  return from_positions(d, B, cfg.in_channels, T, F);
}

mask::TFMask estimator_forward(EstimatorParams& params, const Tensor& x,
                               Rng* override_rng, Tensor* gate_weights_out) {
  const EstimatorConfig& cfg = params.cfg;
  if (x.numel() != static_cast<std::size_t>(cfg.in_channels) * cfg.window_frames *
                       cfg.bins)
    throw ShapeError("estimator_forward: window shape mismatch");
  Tensor out = estimator_forward_batch(params, x, 1, /*training=*/false, nullptr,
                                       override_rng, gate_weights_out);
  mask::TFMask m(cfg.window_frames, cfg.bins);
  std::copy(out.data.begin(), out.data.end(), m.data.begin());
  return m;
}

void apply_sentinel(double* window, int C, int T, int F,
                    const std::vector<bool>& link_ok) {
  if (C < 1) throw ShapeError("apply_sentinel: no channels");
  const int links = (C - 1) / 2;
  if (static_cast<int>(link_ok.size()) != links)
    throw ShapeError("apply_sentinel: link flags do not match channel layout");
  const std::size_t per = static_cast<std::size_t>(T) * F;
  for (int j = 0; j < links; ++j) {
    if (link_ok[j]) continue;
    double* zc = window + (1 + 2 * j) * per;
    double* nc = window + (2 + 2 * j) * per;
    std::fill(zc, zc + per, kSentinel);
    std::fill(nc, nc + per, kSentinel);
  }
}

void log_compress(double* values, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) values[i] = std::log1p(values[i]);
}

mask::TFMask infer_mask(EstimatorParams& params, const double* mags, int C, int T,
                        int F, const std::vector<bool>& link_ok,
                        std::uint64_t override_seed, Tensor* gate_log) {
  const EstimatorConfig& cfg = params.cfg;
  const int W = cfg.window_frames;
  if (C != cfg.in_channels) throw ShapeError("infer_mask: channel count mismatch");
  if (F != cfg.bins) throw ShapeError("infer_mask: bin count mismatch");
  if (T < W) throw LengthError("infer_mask: need at least " + std::to_string(W) +
                               " frames, got " + std::to_string(T));

  // Features over the whole utterance: log magnitudes, standardized, sentinel.
  Tensor feat({C, T, F});
  std::copy(mags, mags + feat.numel(), feat.data.begin());
  log_compress(feat.ptr(), feat.numel());
  params.norm.apply(feat.ptr(), C, T, F);
  if (C > 1) apply_sentinel(feat.ptr(), C, T, F, link_ok);

  const int half = W / 2;
  mask::TFMask out(T, F);
  Rng override_rng(mix_seed(override_seed, 0x9a7eULL));
  std::vector<double> gate_rows;
  int gate_cols = 0;

  auto record_gate = [&](const Tensor& w) {
    if (!gate_log) return;
    gate_cols = w.shape.back();
    gate_rows.insert(gate_rows.end(), w.data.begin(), w.data.end());
  };

  auto window_at = [&](int start) {
    Tensor win({C, W, F});
    const std::size_t per_t = static_cast<std::size_t>(F);
    for (int c = 0; c < C; ++c)
      for (int t = 0; t < W; ++t)
        std::memcpy(win.ptr() + (static_cast<std::size_t>(c) * W + t) * per_t,
                    feat.ptr() + (static_cast<std::size_t>(c) * T + start + t) * per_t,
                    sizeof(double) * per_t);
    return win;
  };

  const bool per_window = gate_is_input_dependent(cfg.gate);
  if (!per_window) {
    // Whole-utterance pass; interior middle frames are bit-identical to the
    // per-window computation (same kernels, same per-row accumulation).
    Tensor gate_w;
    Tensor full = estimator_forward_batch(params, feat, 1, false, nullptr,
                                          nullptr, gate_log ? &gate_w : nullptr);
    if (gate_log && gate_w.numel() > 0) record_gate(gate_w);
    for (int t = half; t < T - half; ++t)
      std::memcpy(&out.at(t, 0), full.ptr() + static_cast<std::size_t>(t) * F,
                  sizeof(double) * F);
    for (int edge = 0; edge < 2; ++edge) {
      const int start = edge == 0 ? 0 : T - W;
      Tensor win = window_at(start);
      Tensor gw;
      Tensor m = estimator_forward_batch(params, win, 1, false, nullptr, nullptr,
                                         gate_log ? &gw : nullptr);
      if (gate_log && gw.numel() > 0) record_gate(gw);
      if (edge == 0) {
        for (int t = 0; t < half; ++t)
          std::memcpy(&out.at(t, 0), m.ptr() + static_cast<std::size_t>(t) * F,
                      sizeof(double) * F);
      } else {
        for (int t = T - half; t < T; ++t) {
          const int r = t - start;
          std::memcpy(&out.at(t, 0), m.ptr() + static_cast<std::size_t>(r) * F,
                      sizeof(double) * F);
        }
      }
    }
  } else {
    for (int start = 0; start <= T - W; ++start) {
      Tensor win = window_at(start);
      Tensor gw;
      Tensor m = estimator_forward_batch(params, win, 1, false, nullptr,
                                         &override_rng, gate_log ? &gw : nullptr);
      if (gate_log && gw.numel() > 0) record_gate(gw);
      auto take = [&](int rel) {
        std::memcpy(&out.at(start + rel, 0),
                    m.ptr() + static_cast<std::size_t>(rel) * F, sizeof(double) * F);
      };
      take(half);
      if (start == 0)
        for (int r = 0; r < half; ++r) take(r);
      if (start == T - W)
        for (int r = half + 1; r < W; ++r) take(r);
    }
  }

  if (gate_log && gate_cols > 0) {
    *gate_log = Tensor({static_cast<int>(gate_rows.size()) / gate_cols, gate_cols});
    std::copy(gate_rows.begin(), gate_rows.end(), gate_log->data.begin());
  }
  return out;
}

// ---- serialization ----

void EstimatorParams::save(const std::string& path) const {
  nlohmann::json j;
  j["in_channels"] = cfg.in_channels;
  j["window_frames"] = cfg.window_frames;
  j["bins"] = cfg.bins;
  j["conv_filters"] = cfg.conv_filters;
  j["pool"] = cfg.pool;
  j["tconv_width"] = cfg.tconv_width;
  j["tconv_kernel"] = cfg.tconv_kernel;
  j["gate"] = gate_name(cfg.gate);
  j["se_reduction"] = cfg.se_reduction;
  j["normalize_features"] = cfg.normalize_features;
  j["init_seed"] = init_seed;
  j["norm_enabled"] = norm.enabled;
  j["norm_mean"] = norm.mean;
  j["norm_std"] = norm.std;
  const std::string header = j.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write("WASNNET1\n", 9);
  const std::uint64_t hlen = header.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  auto dump = [&](const Tensor& t) {
    out.write(reinterpret_cast<const char*>(t.ptr()),
              static_cast<std::streamsize>(t.numel() * sizeof(double)));
  };
  // const_cast: parameters() is non-const only because trainers mutate
  auto& self = const_cast<EstimatorParams&>(*this);
  for (ParamTensor* p : self.parameters()) dump(p->value);
  for (const auto& bn : bns) {
    dump(bn.run_mean);
    dump(bn.run_var);
  }
  if (!out) throw IoError("write failed for " + path);
}

EstimatorParams EstimatorParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[9];
  in.read(magic, 9);
  if (std::memcmp(magic, "WASNNET1\n", 9) != 0)
    throw IoError(path + ": not an estimator file");
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string header(hlen, '\0');
  in.read(header.data(), static_cast<std::streamsize>(hlen));
  nlohmann::json j = nlohmann::json::parse(header);

  EstimatorConfig cfg;
  cfg.in_channels = j.at("in_channels").get<int>();
  cfg.window_frames = j.at("window_frames").get<int>();
  cfg.bins = j.at("bins").get<int>();
  cfg.conv_filters = j.at("conv_filters").get<std::vector<int>>();
  cfg.pool = j.at("pool").get<int>();
  cfg.tconv_width = j.at("tconv_width").get<int>();
  cfg.tconv_kernel = j.at("tconv_kernel").get<int>();
  cfg.gate = gate_from_name(j.at("gate").get<std::string>());
  cfg.se_reduction = j.at("se_reduction").get<int>();
  cfg.normalize_features = j.at("normalize_features").get<bool>();

  EstimatorParams p;
  p.init(cfg, j.at("init_seed").get<std::uint64_t>());
  p.norm.enabled = j.at("norm_enabled").get<bool>();
  p.norm.mean = j.at("norm_mean").get<std::vector<double>>();
  p.norm.std = j.at("norm_std").get<std::vector<double>>();

  auto slurp = [&](Tensor& t) {
    in.read(reinterpret_cast<char*>(t.ptr()),
            static_cast<std::streamsize>(t.numel() * sizeof(double)));
  };
  for (ParamTensor* pt : p.parameters()) slurp(pt->value);
  for (auto& bn : p.bns) {
    slurp(bn.run_mean);
    slurp(bn.run_var);
  }
  if (!in) throw IoError("truncated estimator file " + path);
  return p;
}

}  // namespace wasn::nn
