#pragma once

#include "glyphlab/tensor.hpp"

#include <cstdint>
#include <vector>

namespace glyphlab::diffusion {

// Per-timestep noise tables. Index t is 1-based in the math; vectors store
// t = 1..T at offsets 0..T-1.
struct NoiseSchedule {
    int T = 0;
    std::vector<double> betas;       // beta_s in (0,1)
    std::vector<double> alphas_bar;  // cumulative product of (1 - beta_s), strictly decreasing
    std::vector<double> sigmas;      // sqrt((1 - alpha_bar) / alpha_bar), strictly increasing

    double alpha_bar(int t) const { return alphas_bar.at(static_cast<std::size_t>(t) - 1); }
    double sigma(int t) const { return sigmas.at(static_cast<std::size_t>(t) - 1); }
};

// Linear beta ramp from beta_start to beta_end over T steps.
// Requires T >= 1 and 0 < beta_start <= beta_end < 1.
NoiseSchedule build_noise_schedule(int T, double beta_start, double beta_end);

// z_t = sqrt(alpha_bar_t) * z0 + sqrt(1 - alpha_bar_t) * eps, elementwise.
// t is 1-based; throws on out-of-range t or shape mismatch.
Tensor forward_noise(const Tensor& z0, int t, const Tensor& eps, const NoiseSchedule& sched);

struct SamplerConfig {
    int num_steps = 50;
    double sigma_min = 0.02;
    double sigma_max = 10.0;
    double rho = 7.0;
    double omega = 2.0;  // CFG guidance scale
    std::uint64_t seed = 0;

    void validate() const;
};

// Karras-spaced sigma ladder: num_steps strictly decreasing values from
// sigma_max to sigma_min, followed by a terminal 0. Size num_steps + 1.
std::vector<double> karras_sigma_ladder(int num_steps, double sigma_min, double sigma_max, double rho);

}  // namespace glyphlab::diffusion
