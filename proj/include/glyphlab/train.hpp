#pragma once

#include "glyphlab/model.hpp"
#include "glyphlab/optimizer.hpp"
#include "glyphlab/rng.hpp"
#include "glyphlab/schedule.hpp"
#include "glyphlab/synth.hpp"

#include <string>
#include <vector>

namespace glyphlab::training {

struct TrainConfig {
    int steps = 1200;  // per phase; phase_a/b_steps override when >= 0
    int phase_a_steps = -1;
    int phase_b_steps = -1;
    int batch_size = 6;
    double lr = 2e-4;
    double cond_dropout_p = 0.1;
    double s_ctrl = 1.0;
    std::uint64_t seed = 0;
    int T = 200;
    int checkpoint_every = 500;
    double beta_start = 1e-4;
    double beta_end = 0.05;

    int a_steps() const { return phase_a_steps >= 0 ? phase_a_steps : steps; }
    int b_steps() const { return phase_b_steps >= 0 ? phase_b_steps : steps; }
    void validate() const;
};

// Conditioning inputs prepared from one corpus sample.
struct PreparedBatchItem {
    const corpus::CorpusSample* sample = nullptr;
    bool zero_text_conditioning = false;  // phase A
};

// One epsilon-prediction step over a batch: per item samples t and eps,
// forms z_t, evaluates both control branches mixed at lambda = 0.5, applies
// conditioning dropout, and runs one AdamW update on the trainable
// parameters. Returns the mean loss. Throws on a non-finite loss.
double training_step(denoiser::DenoiserParams& params, OptState& opt, const std::vector<PreparedBatchItem>& batch,
                     const diffusion::NoiseSchedule& sched, const TrainConfig& cfg, Rng& rng);

struct TrainResult {
    std::string checkpoint_path;
    std::vector<double> losses;
};

// Two-phase recipe. Phase A trains backbone + SR branch on pos-HQ / pos-LQ
// with text conditioning zeroed; phase B freezes those and trains the text
// branch and projections on all four quadrants. Writes periodic resumable
// checkpoints plus out_dir/loss.csv, and returns the final checkpoint path.
TrainResult train_loop(const std::vector<corpus::CorpusSample>& dataset, const TrainConfig& cfg,
                       const denoiser::ModelConfig& model_cfg, const std::string& out_dir, bool resume = false);

// Internal helpers shared with tests.
denoiser::TrainSample make_train_sample(const corpus::CorpusSample& s, int t, const Tensor& eps,
                                        const diffusion::NoiseSchedule& sched, bool drop, bool zero_text,
                                        double s_ctrl);

}  // namespace glyphlab::training
