#pragma once

#include "glyphlab/autodiff.hpp"
#include "glyphlab/guidance.hpp"
#include "glyphlab/rng.hpp"
#include "glyphlab/tensor.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace glyphlab::denoiser {

struct ModelConfig {
    int levels = 3;
    std::vector<int> widths = {32, 64, 128};
    int emb_dim = 64;       // conditioning embedding fed to the backbone
    int time_emb_dim = 64;  // sinusoidal noise-level embedding
    int in_channels = 3;
    int hint_channels = 3;  // spatial hint concatenated inside control branches

    int ctx_dim() const { return emb_dim + time_emb_dim; }
    void validate() const;
};

enum class ParamGroup { Backbone, SrBranch, TxtBranch, Projections };

const char* param_group_name(ParamGroup g);
ParamGroup param_group_from_name(const std::string& s);

struct ParamEntry {
    Tensor value;
    Tensor grad;  // persistent accumulator, same shape as value
    ParamGroup group = ParamGroup::Backbone;
    bool frozen = false;
};

// Named parameter store. std::map keeps iteration deterministic everywhere
// (init, optimizer sweeps, checkpoints).
struct DenoiserParams {
    ModelConfig config;
    std::map<std::string, ParamEntry> tensors;

    ParamEntry& at(const std::string& name);
    const ParamEntry& at(const std::string& name) const;

    void zero_grads();
    std::size_t num_scalars(bool trainable_only) const;

    // Phase A trains the backbone and SR branch; phase B freezes those and
    // trains the text branch plus the embedding projections (the
    // construction default).
    void apply_phase_a_freeze();
    void apply_phase_b_freeze();
};

// Random initialization with zeroed output layers: the head conv, the
// attention output projection and the per-level control-branch projections
// start at zero, so a fresh branch injects exactly nothing.
DenoiserParams init_model_params(const ModelConfig& cfg, std::uint64_t seed);

struct ControlResiduals {
    // One [width_l, H_l, W_l] map per level, added to the decoder feature at
    // that level before its blocks.
    std::vector<Tensor> levels;
};

enum class Branch { Sr, Txt };

// r~_l = s_ctrl * ((1 - lambda_t) * r_txt + lambda_t * r_sr) per level.
ControlResiduals mix_control_residuals(const ControlResiduals& r_sr, const ControlResiduals& r_txt, double lambda_t,
                                       double s_ctrl);

// Sinusoidal embedding of log(sigma).
Tensor time_embedding(double sigma, int dim);

// Epsilon prediction for a single latent. cond is the emb_dim backbone
// conditioning vector; control may be null (no injection).
Tensor denoise_predict(const DenoiserParams& params, const Tensor& z_t, double sigma,
                       const guidance::Embedding& cond, const ControlResiduals* control);

// Runs one control branch on (z_t ++ spatial_hint) conditioned on the raw
// 256-d prompt embedding; returns one residual per level.
ControlResiduals control_branch_forward(const DenoiserParams& params, Branch branch, const Tensor& z_t,
                                        const Tensor& spatial_hint, const guidance::Embedding& cond);

// Applies a stored projection (proj.img / proj.txt) to a raw embedding.
guidance::Embedding project_embedding(const DenoiserParams& params, Branch branch, const guidance::Embedding& raw);

// ---- tape-level graph builders (training & gradient checks) -------------

// Caches one tape leaf per parameter; trainable parameters get
// requires_grad when train mode is on.
struct GraphBuilder {
    Tape& tape;
    const DenoiserParams& params;
    bool train = false;
    std::map<std::string, NodePtr> cache;

    GraphBuilder(Tape& t, const DenoiserParams& p, bool train_mode) : tape(t), params(p), train(train_mode) {}
    NodePtr param(const std::string& name);
};

// eps prediction graph; residuals, when present, must hold one node per level.
NodePtr backbone_graph(GraphBuilder& gb, const NodePtr& z, const NodePtr& ctx,
                       const std::vector<NodePtr>* residuals);

std::vector<NodePtr> branch_graph(GraphBuilder& gb, Branch branch, const NodePtr& z, const NodePtr& hint,
                                  const NodePtr& cond);

// One training-sample forward: projections, both branches, residual mix,
// backbone, MSE against the noise target. With drop_conditioning the
// embedding is zeroed and no control is injected (the CFG null condition).
struct TrainSample {
    Tensor z_t;
    double sigma = 1.0;
    Tensor eps_target;
    Tensor sr_hint;   // [-1,1] CHW, canvas-sized
    Tensor txt_hint;  // {0,1} mask CHW (stored in [-1,1] convention upstream)
    guidance::Embedding e_img_raw;  // 256-d frozen-encoder outputs
    guidance::Embedding e_txt_raw;
    bool drop_conditioning = false;
    bool zero_text_conditioning = false;  // phase A: text cues zeroed, text branch inert
    double lambda = 0.5;  // residual/embedding blend; 0.5 during training
    double s_ctrl = 1.0;
};

NodePtr training_loss_graph(GraphBuilder& gb, const TrainSample& sample);

// After backward(), copies node grads into params.grad for trainable
// entries (accumulate-add).
void accumulate_param_grads(GraphBuilder& gb, DenoiserParams& into);

}  // namespace glyphlab::denoiser
