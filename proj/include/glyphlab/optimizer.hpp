#pragma once

#include "glyphlab/model.hpp"

#include <map>
#include <string>

namespace glyphlab::training {

struct OptConfig {
    double lr = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

// AdamW moments, kept only for parameters that are trainable at init time.
struct OptState {
    struct Moments {
        Tensor m;
        Tensor v;
    };
    std::map<std::string, Moments> moments;
    long long step = 0;
};

OptState init_opt_state(const denoiser::DenoiserParams& params);

// One decoupled-weight-decay Adam update over the trainable parameters,
// consuming params.grad. Throws if a trainable parameter has no state.
void adamw_update(denoiser::DenoiserParams& params, OptState& opt, const OptConfig& cfg);

void save_opt_state(const std::string& path, const OptState& opt);
OptState load_opt_state(const std::string& path);

}  // namespace glyphlab::training
