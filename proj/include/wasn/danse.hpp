// wasn/danse.hpp
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

#ifndef WASN_DANSE_HPP
#define WASN_DANSE_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wasn/mwf.hpp"
#include "wasn/scene.hpp"
#include "wasn/stft.hpp"

namespace wasn::danse {

// The paper's protocol replaces only the estimator inputs of a broken link
// (the filters keep using every compressed signal); the alternative drops the
// failed channels from the filter stack as well.
enum class FailureMode { kEstimator, kBoth };

struct LinkFailure {
  int sender = 0;
  int receiver = 0;
};

struct LinkFailurePlan {
  FailureMode mode = FailureMode::kEstimator;
  std::vector<LinkFailure> failures;

  bool link_ok(int sender, int receiver) const;
  std::string to_json() const;
  static LinkFailurePlan from_json(const std::string& text);
};

// Magnitude channels handed to a mask estimator: [C][T][F], C contiguous rows.
struct MagTensor {
  int channels = 0, frames = 0, bins = 0;
  std::vector<double> data;

  MagTensor() = default;
  MagTensor(int c, int t, int f)
      : channels(c), frames(t), bins(f),
        data(static_cast<std::size_t>(c) * t * f, 0.0) {}
  double& at(int c, int t, int f) {
    return data[(static_cast<std::size_t>(c) * frames + t) * bins + f];
  }
  double at(int c, int t, int f) const {
    return data[(static_cast<std::size_t>(c) * frames + t) * bins + f];
  }
};

// Supplies TF masks to the two filtering steps. Step 1 sees the local
// reference magnitude only; step 2 sees the fixed-width channel stack
// [local_ref, z_1, n~_1, ..., z_{K-1}, n~_{K-1}] plus the link states and is
// responsible for any sentinel substitution.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual mask::TFMask step1_mask(int node, const MagTensor& local_ref) = 0;
  virtual mask::TFMask step2_mask(int node, const MagTensor& stacked,
                                  const std::vector<bool>& link_ok) = 0;
};

// Oracle provider: the reference-mic IRM for both steps.
class OracleMaskProvider : public MaskProvider {
 public:
  explicit OracleMaskProvider(std::vector<mask::TFMask> ref_irm)
      : irm_(std::move(ref_irm)) {}
  mask::TFMask step1_mask(int node, const MagTensor&) override { return irm_.at(node); }
  mask::TFMask step2_mask(int node, const MagTensor&,
                          const std::vector<bool>&) override {
    return irm_.at(node);
  }

 private:
  std::vector<mask::TFMask> irm_;
};

// One node's signals and per-node products of the two-step scheme.
struct NodeState {
  int node_id = 0;
  int ref_mic = 0;
  dsp::ComplexSpectrogram local;    // [M_k][T][F]
  FilterBank local_filter;          // D = M_k
  dsp::ComplexSpectrogram z;        // compressed target estimate, 1 ch
  dsp::ComplexSpectrogram n_tilde;  // compressed noise estimate, 1 ch
  std::vector<bool> link_ok;        // incoming links, neighbor order

  // Neighbors in ascending node id, excluding node_id.
  static std::vector<int> neighbor_ids(int node_id, int num_nodes);
};

// Local MWF over the node's own channels; z = w^H y, n~ = y_ref - z (exact).
void step1_compress(NodeState& node, const mask::TFMask& mask,
                    bool speech_weighted_ryy = false);

struct Step2Result {
  dsp::ComplexSpectrogram enhanced;  // 1 ch
  FilterBank filter;                 // stacked dimension
  std::vector<int> stacked_senders;  // neighbor ids whose z/n~ entered the stack
};

// Stacks D = M_k + 2 * #present channels and solves the node-specific MWF.
// `received` holds (z_j, n~_j) per neighbor or nullopt for a dead link; its
// length must be K-1.
Step2Result step2_enhance(
    const NodeState& node,
    const std::vector<std::optional<std::pair<const dsp::ComplexSpectrogram*,
                                              const dsp::ComplexSpectrogram*>>>&
        received,
    const mask::TFMask& mask, FailureMode mode, bool speech_weighted_ryy = false);

struct PipelineOptions {
  dsp::StftConfig stft;
  int ref_mic = 0;
  FailureMode failure_mode = FailureMode::kEstimator;
  bool speech_weighted_ryy = false;
};

struct PipelineResult {
  std::vector<NodeState> nodes;
  std::vector<Step2Result> step2;
  std::vector<std::vector<double>> enhanced_time;       // istft per node
  std::vector<std::vector<double>> step1_time;          // istft of z per node
  std::vector<mask::TFMask> step1_masks, step2_masks;
};

// Executes step 1 at every node, exchanges, executes step 2 at every node.
PipelineResult run_pipeline(const sim::SceneSignals& scene, MaskProvider& masks,
                            const LinkFailurePlan& failures,
                            const PipelineOptions& opts);

// ---- batch iteration (convergence to the centralized filter) ----

struct DanseIterOptions {
  int max_iters = 20;
  double tol = 1e-6;
  bool dual_exchange = true;  // send z and n~ (matches run_pipeline)
  bool sequential = false;    // update nodes one at a time instead of jointly
};

struct DanseIterResult {
  std::vector<FilterBank> node_filters;  // final stacked filters per node
  std::vector<dsp::ComplexSpectrogram> enhanced;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Signal-level batch iteration: alternates compression and node-specific
// solves until the enhanced outputs stop changing. One iteration with
// tol = +inf reproduces run_pipeline.
DanseIterResult iterate_danse(const std::vector<dsp::ComplexSpectrogram>& node_signals,
                              const std::vector<mask::TFMask>& masks, int ref_mic,
                              const DanseIterOptions& opts);

// Covariance-level core used by the oracle-equivalence tests: exact per-node
// output vectors q_k (enhanced = q_k^H y) computed from full-array covariance
// matrices. Works per frequency.
struct DanseCovResult {
  std::vector<Eigen::VectorXcd> q;  // per node, dimension M
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

DanseCovResult iterate_danse_cov(const Eigen::MatrixXcd& ryy_full,
                                 const Eigen::MatrixXcd& rnn_full,
                                 const std::vector<int>& node_channel_counts,
                                 int ref_mic, const DanseIterOptions& opts);

// Centralized node-specific MWF on the full array (the convergence target).
Eigen::VectorXcd centralized_mwf(const Eigen::MatrixXcd& ryy_full,
                                 const Eigen::MatrixXcd& rnn_full, int ref_index);

}  // namespace wasn::danse

#endif  // WASN_DANSE_HPP
