// danse.cpp
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

// Two-step distributed MWF with compressed target+noise exchange, plus the
// batch iteration that converges to the centralized node-specific filter.

#include "wasn/danse.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "wasn/covariance.hpp"
#include "wasn/kernels.hpp"

namespace wasn::danse {

bool LinkFailurePlan::link_ok(int sender, int receiver) const {
  for (const auto& f : failures)
    if (f.sender == sender && f.receiver == receiver) return false;
  return true;
}

std::string LinkFailurePlan::to_json() const {
  nlohmann::json j;
  j["mode"] = mode == FailureMode::kEstimator ? "estimator" : "both";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : failures)
    arr.push_back({{"sender", f.sender}, {"receiver", f.receiver}});
  j["failures"] = arr;
  return j.dump(2) + "\n";
}

LinkFailurePlan LinkFailurePlan::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LinkFailurePlan plan;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "estimator") plan.mode = FailureMode::kEstimator;
  else if (mode == "both") plan.mode = FailureMode::kBoth;
  else throw ConfigError("unknown failure mode " + mode);
  for (const auto& fj : j.at("failures"))
    plan.failures.push_back(
        {fj.at("sender").get<int>(), fj.at("receiver").get<int>()});
  return plan;
}

std::vector<int> NodeState::neighbor_ids(int node_id, int num_nodes) {
  std::vector<int> ids;
  ids.reserve(num_nodes - 1);
  for (int j = 0; j < num_nodes; ++j)
    if (j != node_id) ids.push_back(j);
  return ids;
}

void step1_compress(NodeState& node, const mask::TFMask& mask,
                    bool speech_weighted_ryy) {
  CovariancePair cov = estimate_covariances(node.local, mask, speech_weighted_ryy);
  node.local_filter = solve_mwf(cov, node.ref_mic);
  node.local_filter.ref_selector = {node.node_id, node.ref_mic};
  node.z = filter_apply(node.local, node.local_filter);
  node.n_tilde = dsp::ComplexSpectrogram(node.local.config, 1, node.local.frames);
  for (int t = 0; t < node.local.frames; ++t)
    for (int f = 0; f < node.local.bins; ++f)
      node.n_tilde.at(0, t, f) = node.local.at(node.ref_mic, t, f) - node.z.at(0, t, f);
}

Step2Result step2_enhance(
    const NodeState& node,
    const std::vector<std::optional<std::pair<const dsp::ComplexSpectrogram*,
                                              const dsp::ComplexSpectrogram*>>>&
        received,
    const mask::TFMask& mask, FailureMode mode, bool speech_weighted_ryy) {
  const int M = node.local.channels;
  const int T = node.local.frames;
  const int F = node.local.bins;

  if (mode == FailureMode::kEstimator)
    for (const auto& r : received)
      if (!r.has_value())
        throw ProtocolError(
            "estimator failure mode keeps all signals at the filter, but a "
            "compressed pair is missing");

  std::vector<int> senders;
  int extra = 0;
  for (std::size_t i = 0; i < received.size(); ++i)
    if (received[i].has_value()) extra += 2;

  const int D = M + extra;
  dsp::ComplexSpectrogram stacked(node.local.config, D, T);
  std::copy(node.local.data.begin(), node.local.data.end(), stacked.data.begin());
  const std::size_t per = static_cast<std::size_t>(T) * F;
  int c = M;
  for (std::size_t i = 0; i < received.size(); ++i) {
    if (!received[i].has_value()) continue;
    const auto& [z, nt] = *received[i];
    if (z->frames != T || z->bins != F || nt->frames != T || nt->bins != F)
      throw ShapeError("received compressed signals disagree in shape");
    std::copy(z->data.begin(), z->data.end(), stacked.data.begin() + c * per);
    std::copy(nt->data.begin(), nt->data.end(),
              stacked.data.begin() + (c + 1) * per);
    senders.push_back(static_cast<int>(i));
    c += 2;
  }

  CovariancePair cov = estimate_covariances(stacked, mask, speech_weighted_ryy);
  Step2Result out;
  out.filter = solve_mwf(cov, node.ref_mic);
  out.filter.ref_selector = {node.node_id, node.ref_mic};
  out.enhanced = filter_apply(stacked, out.filter);
  out.stacked_senders = std::move(senders);
  return out;
}

namespace {

MagTensor magnitudes_of(const std::vector<const dsp::ComplexSpectrogram*>& chans) {
  const int T = chans[0]->frames, F = chans[0]->bins;
  MagTensor mags(static_cast<int>(chans.size()), T, F);
  for (std::size_t c = 0; c < chans.size(); ++c) {
    const auto& s = *chans[c];
    if (s.channels != 1) throw ShapeError("magnitudes_of expects 1-ch inputs");
    kern::cmag(s.data.data(), &mags.at(static_cast<int>(c), 0, 0),
               static_cast<std::size_t>(T) * F);
  }
  return mags;
}

}  // namespace

PipelineResult run_pipeline(const sim::SceneSignals& scene, MaskProvider& masks,
                            const LinkFailurePlan& failures,
                            const PipelineOptions& opts) {
  const int K = static_cast<int>(scene.mixtures.size());
  if (K == 0) throw ShapeError("scene has no nodes");

  PipelineResult res;
  res.nodes.resize(K);

  // Step 1: local compression at every node.
  for (int k = 0; k < K; ++k) {
    NodeState& node = res.nodes[k];
    node.node_id = k;
    node.ref_mic = opts.ref_mic;
    node.local = dsp::stft_multi(scene.mixtures[k], opts.stft);
    if (node.ref_mic < 0 || node.ref_mic >= node.local.channels)
      throw ShapeError("reference mic index out of range");
    const auto neighbors = NodeState::neighbor_ids(k, K);
    node.link_ok.resize(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i)
      node.link_ok[i] = failures.link_ok(neighbors[i], k);

    dsp::ComplexSpectrogram ref = node.local.channel(node.ref_mic);
    MagTensor ref_mag = magnitudes_of({&ref});
    mask::TFMask m1 = masks.step1_mask(k, ref_mag);
    step1_compress(node, m1, opts.speech_weighted_ryy);
    res.step1_masks.push_back(std::move(m1));
    res.step1_time.push_back(dsp::istft(node.z, opts.stft));
  }

  // Step 2: exchange and node-specific solve.
  for (int k = 0; k < K; ++k) {
    NodeState& node = res.nodes[k];
    const auto neighbors = NodeState::neighbor_ids(k, K);

    std::vector<const dsp::ComplexSpectrogram*> mag_chans;
    dsp::ComplexSpectrogram ref = node.local.channel(node.ref_mic);
    mag_chans.push_back(&ref);
    for (int j : neighbors) {
      mag_chans.push_back(&res.nodes[j].z);
      mag_chans.push_back(&res.nodes[j].n_tilde);
    }
    MagTensor stacked_mags = magnitudes_of(mag_chans);
    mask::TFMask m2 = masks.step2_mask(k, stacked_mags, node.link_ok);

    std::vector<std::optional<std::pair<const dsp::ComplexSpectrogram*,
                                        const dsp::ComplexSpectrogram*>>>
        received;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      const int j = neighbors[i];
      if (opts.failure_mode == FailureMode::kBoth && !node.link_ok[i]) {
        received.push_back(std::nullopt);
      } else {
        received.push_back(std::make_pair(&res.nodes[j].z, &res.nodes[j].n_tilde));
      }
    }
    Step2Result s2 = step2_enhance(node, received, m2, opts.failure_mode,
                                   opts.speech_weighted_ryy);
    res.enhanced_time.push_back(dsp::istft(s2.enhanced, opts.stft));
    res.step2.push_back(std::move(s2));
    res.step2_masks.push_back(std::move(m2));
  }
  return res;
}

// ---- batch iteration ----

namespace {

double rel_change(const dsp::ComplexSpectrogram& a, const dsp::ComplexSpectrogram& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(a.data[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : (num > 0.0 ? 1.0 : 0.0);
}

}  // namespace

DanseIterResult iterate_danse(const std::vector<dsp::ComplexSpectrogram>& node_signals,
                              const std::vector<mask::TFMask>& masks, int ref_mic,
                              const DanseIterOptions& opts) {
  const int K = static_cast<int>(node_signals.size());
  if (K == 0) throw ShapeError("no nodes");
  if (static_cast<int>(masks.size()) != K)
    throw ShapeError("one mask per node required");

  std::vector<NodeState> nodes(K);
  for (int k = 0; k < K; ++k) {
    nodes[k].node_id = k;
    nodes[k].ref_mic = ref_mic;
    nodes[k].local = node_signals[k];
    step1_compress(nodes[k], masks[k]);
  }

  auto solve_node = [&](int k) -> Step2Result {
    const auto neighbors = NodeState::neighbor_ids(k, K);
    if (!opts.dual_exchange) {
      // Build the stack manually without the n~ columns.
      const int M = nodes[k].local.channels;
      const int T = nodes[k].local.frames;
      const int F = nodes[k].local.bins;
      const int D = M + static_cast<int>(neighbors.size());
      dsp::ComplexSpectrogram stacked(nodes[k].local.config, D, T);
      std::copy(nodes[k].local.data.begin(), nodes[k].local.data.end(),
                stacked.data.begin());
      const std::size_t per = static_cast<std::size_t>(T) * F;
      int c = M;
      for (int j : neighbors) {
        std::copy(nodes[j].z.data.begin(), nodes[j].z.data.end(),
                  stacked.data.begin() + c * per);
        ++c;
      }
      CovariancePair cov = estimate_covariances(stacked, masks[k]);
      Step2Result out;
      out.filter = solve_mwf(cov, ref_mic);
      out.filter.ref_selector = {k, ref_mic};
      out.enhanced = filter_apply(stacked, out.filter);
      out.stacked_senders = neighbors;
      return out;
    }
    std::vector<std::optional<std::pair<const dsp::ComplexSpectrogram*,
                                        const dsp::ComplexSpectrogram*>>>
        received;
    for (int j : neighbors)
      received.push_back(std::make_pair(&nodes[j].z, &nodes[j].n_tilde));
    return step2_enhance(nodes[k], received, masks[k], FailureMode::kEstimator);
  };

  auto recompress = [&](int k, const FilterBank& stacked_filter) {
    // The next compression is the local partition of the stacked filter.
    const int M = nodes[k].local.channels;
    FilterBank local;
    local.bins = stacked_filter.bins;
    local.dim = M;
    local.ref_selector = {k, ref_mic};
    local.w.resize(static_cast<std::size_t>(local.bins) * M);
    for (int f = 0; f < local.bins; ++f)
      std::copy(stacked_filter.at(f), stacked_filter.at(f) + M, local.at(f));
    nodes[k].local_filter = std::move(local);
    nodes[k].z = filter_apply(nodes[k].local, nodes[k].local_filter);
    for (int t = 0; t < nodes[k].local.frames; ++t)
      for (int f = 0; f < nodes[k].local.bins; ++f)
        nodes[k].n_tilde.at(0, t, f) =
            nodes[k].local.at(ref_mic, t, f) - nodes[k].z.at(0, t, f);
  };

  DanseIterResult res;
  res.enhanced.resize(K);
  res.node_filters.resize(K);
  std::vector<Step2Result> current(K);

  for (int it = 1; it <= opts.max_iters; ++it) {
    std::vector<Step2Result> next(K);
    if (opts.sequential) {
      for (int k = 0; k < K; ++k) {
        next[k] = solve_node(k);
        recompress(k, next[k].filter);
      }
    } else {
      for (int k = 0; k < K; ++k) next[k] = solve_node(k);
      for (int k = 0; k < K; ++k) recompress(k, next[k].filter);
    }

    double resid = 0.0;
    if (it > 1) {
      for (int k = 0; k < K; ++k)
        resid = std::max(resid, rel_change(next[k].enhanced, current[k].enhanced));
    }
    current = std::move(next);
    res.iterations = it;
    if (it > 1) {
      res.residual = resid;
      if (resid < opts.tol) {
        res.converged = true;
        break;
      }
    } else if (!(opts.tol < std::numeric_limits<double>::infinity())) {
      // tol = inf: single pass, identical to run_pipeline
      res.converged = true;
      break;
    }
  }
  for (int k = 0; k < K; ++k) {
    res.enhanced[k] = std::move(current[k].enhanced);
    res.node_filters[k] = std::move(current[k].filter);
  }
  return res;
}

// ---- covariance-level core ----

namespace {

std::vector<cplx> to_rowmajor(const Eigen::MatrixXcd& m) {
  std::vector<cplx> out(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  return out;
}

Eigen::VectorXcd solve_eigen(const Eigen::MatrixXcd& ryy,
                             const Eigen::MatrixXcd& rnn, int ref) {
  const int d = static_cast<int>(ryy.rows());
  std::vector<cplx> ry = to_rowmajor(ryy), rn = to_rowmajor(rnn);
  Eigen::VectorXcd w(d);
  solve_mwf_single(ry.data(), rn.data(), d, ref, w.data());
  return w;
}

}  // namespace

Eigen::VectorXcd centralized_mwf(const Eigen::MatrixXcd& ryy_full,
                                 const Eigen::MatrixXcd& rnn_full, int ref_index) {
  return solve_eigen(ryy_full, rnn_full, ref_index);
}

DanseCovResult iterate_danse_cov(const Eigen::MatrixXcd& ryy_full,
                                 const Eigen::MatrixXcd& rnn_full,
                                 const std::vector<int>& node_channel_counts,
                                 int ref_mic, const DanseIterOptions& opts) {
  const int K = static_cast<int>(node_channel_counts.size());
  const int M = static_cast<int>(ryy_full.rows());
  std::vector<int> offset(K, 0);
  int total = 0;
  for (int k = 0; k < K; ++k) {
    offset[k] = total;
    total += node_channel_counts[k];
  }
  if (total != M) throw ShapeError("channel partition does not match matrix size");

  // Initial compression: local MWF per node.
  std::vector<Eigen::VectorXcd> w_local(K);
  for (int k = 0; k < K; ++k) {
    const int mk = node_channel_counts[k];
    w_local[k] = solve_eigen(ryy_full.block(offset[k], offset[k], mk, mk),
                             rnn_full.block(offset[k], offset[k], mk, mk), ref_mic);
  }

  auto build_compression = [&](int k) -> Eigen::MatrixXcd {
    const int mk = node_channel_counts[k];
    const int extra_per = opts.dual_exchange ? 2 : 1;
    const int dk = mk + extra_per * (K - 1);
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(M, dk);
    for (int i = 0; i < mk; ++i) C(offset[k] + i, i) = 1.0;
    int col = mk;
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      // z_j column: w_jj embedded at node j's channels
      C.block(offset[j], col, node_channel_counts[j], 1) = w_local[j];
      ++col;
      if (opts.dual_exchange) {
        // n~_j column: e_{j,ref} - w_jj
        C.block(offset[j], col, node_channel_counts[j], 1) = -w_local[j];
        C(offset[j] + ref_mic, col) += 1.0;
        ++col;
      }
    }
    return C;
  };

  auto weighted_norm = [&](const Eigen::VectorXcd& v) {
    return std::sqrt(std::max(0.0, (v.adjoint() * ryy_full * v)(0, 0).real()));
  };

  DanseCovResult res;
  res.q.assign(K, Eigen::VectorXcd::Zero(M));
  std::vector<Eigen::VectorXcd> q_prev(K, Eigen::VectorXcd::Zero(M));

  for (int it = 1; it <= opts.max_iters; ++it) {
    std::vector<Eigen::VectorXcd> w_local_next = w_local;
    for (int k = 0; k < K; ++k) {
      Eigen::MatrixXcd C = build_compression(k);
      Eigen::MatrixXcd ryy_t = C.adjoint() * ryy_full * C;
      Eigen::MatrixXcd rnn_t = C.adjoint() * rnn_full * C;
      Eigen::VectorXcd w = solve_eigen(ryy_t, rnn_t, ref_mic);
      res.q[k] = C * w;
      w_local_next[k] = w.head(node_channel_counts[k]);
      if (opts.sequential) w_local[k] = w_local_next[k];
    }
    if (!opts.sequential) w_local = w_local_next;

    double resid = 0.0;
    for (int k = 0; k < K; ++k) {
      const double den = weighted_norm(res.q[k]);
      const double num = weighted_norm(res.q[k] - q_prev[k]);
      resid = std::max(resid, den > 0.0 ? num / den : (num > 0.0 ? 1.0 : 0.0));
    }
    q_prev = res.q;
    res.iterations = it;
    res.residual = resid;
    if (it > 1 && resid < opts.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace wasn::danse
