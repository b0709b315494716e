#pragma once

#include "glyphlab/guidance.hpp"
#include "glyphlab/model.hpp"
#include "glyphlab/schedule.hpp"

namespace glyphlab::diffusion {

// Pluggable latent codec. The default is the identity: pixel-space
// diffusion where the latent is the [-1,1] image tensor itself.
class LatentCodec {
public:
    virtual ~LatentCodec() = default;
    virtual Tensor encode(const Tensor& image_latent) const { return image_latent; }
    virtual Tensor decode(const Tensor& latent) const { return latent; }
};

// Classifier-free guidance: (1 + omega) * D(z, t, cond, control)
//                           - omega * D(z, t, null-cond, no control).
Tensor cfg_residual(const denoiser::DenoiserParams& model, const Tensor& z_t, double t_or_sigma,
                    const guidance::Embedding& cond, const denoiser::ControlResiduals& control, double omega);

// z_{t-1} = z_t - eta_t * eps_hat, eta_t > 0.
Tensor sampler_step(const Tensor& z_t, const Tensor& eps_hat, double eta_t);

// Text-layout mask derived from the bundle's verbalized positions: 1 inside
// each cue's 3x3 grid cell, replicated over `channels`. The neutral
// position phrase contributes nothing.
Tensor text_layout_mask(const guidance::PromptBundle& bundle, int channels, int height, int width);

// Full deterministic reverse sampler. lr_hint is the bicubic-upsampled LR
// image as a [-1,1] latent at output resolution; it fixes the output shape.
// Initializes z ~ N(0, sigma_max^2 I) from cfg.seed, then for each ladder
// step fuses embeddings and control residuals with lambda_t and applies a
// first-order update with eta_i = sigma_i - sigma_{i+1}.
Tensor run_sampler(const denoiser::DenoiserParams& model, const guidance::PromptBundle& bundle,
                   const Tensor& lr_hint, const SamplerConfig& cfg, const guidance::GuidanceSchedule& gsched,
                   double s_ctrl = 1.0, const LatentCodec* codec = nullptr);

}  // namespace glyphlab::diffusion
