#include "glyphlab/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace glyphlab::diffusion {

NoiseSchedule build_noise_schedule(int T, double beta_start, double beta_end) {
    if (T < 1) throw std::invalid_argument("build_noise_schedule: T must be >= 1");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
        throw std::invalid_argument("build_noise_schedule: need 0 < beta_start <= beta_end < 1");
    }
    NoiseSchedule s;
    s.T = T;
    s.betas.resize(T);
    s.alphas_bar.resize(T);
    s.sigmas.resize(T);
    double prod = 1.0;
    for (int t = 0; t < T; ++t) {
        const double beta = T == 1 ? beta_start : beta_start + (beta_end - beta_start) * t / (T - 1);
        s.betas[t] = beta;
        prod *= 1.0 - beta;
        s.alphas_bar[t] = prod;
        s.sigmas[t] = std::sqrt((1.0 - prod) / prod);
    }
    return s;
}

Tensor forward_noise(const Tensor& z0, int t, const Tensor& eps, const NoiseSchedule& sched) {
    if (t < 1 || t > sched.T) {
        throw std::out_of_range("forward_noise: timestep " + std::to_string(t) + " outside [1, " +
                                std::to_string(sched.T) + "]");
    }
    require_same_shape(z0, eps, "forward_noise");
    const double ab = sched.alpha_bar(t);
    const double a = std::sqrt(ab);
    const double b = std::sqrt(1.0 - ab);
    Tensor out(z0.shape);
    for (std::size_t i = 0; i < z0.numel(); ++i) out[i] = a * z0[i] + b * eps[i];
    return out;
}

void SamplerConfig::validate() const {
    if (num_steps < 1) throw std::invalid_argument("SamplerConfig: num_steps must be >= 1");
    if (!(sigma_min > 0.0 && sigma_min < sigma_max)) {
        throw std::invalid_argument("SamplerConfig: need 0 < sigma_min < sigma_max");
    }
    if (!(rho > 0.0)) throw std::invalid_argument("SamplerConfig: rho must be > 0");
}

std::vector<double> karras_sigma_ladder(int num_steps, double sigma_min, double sigma_max, double rho) {
    if (num_steps < 1) throw std::invalid_argument("karras_sigma_ladder: num_steps must be >= 1");
    if (!(sigma_min > 0.0 && sigma_min < sigma_max)) {
        throw std::invalid_argument("karras_sigma_ladder: need 0 < sigma_min < sigma_max");
    }
    if (!(rho > 0.0)) throw std::invalid_argument("karras_sigma_ladder: rho must be > 0");
    std::vector<double> sigmas(static_cast<std::size_t>(num_steps) + 1);
    if (num_steps == 1) {
        sigmas[0] = sigma_max;
    } else {
        const double inv_rho_max = std::pow(sigma_max, 1.0 / rho);
        const double inv_rho_min = std::pow(sigma_min, 1.0 / rho);
        for (int i = 0; i < num_steps; ++i) {
            const double f = static_cast<double>(i) / (num_steps - 1);
            sigmas[i] = std::pow(inv_rho_max + f * (inv_rho_min - inv_rho_max), rho);
        }
    }
    sigmas[num_steps] = 0.0;
    return sigmas;
}

}  // namespace glyphlab::diffusion
