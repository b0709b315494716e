#include "glyphlab/sampler.hpp"

#include "glyphlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace glyphlab::diffusion {

Tensor cfg_residual(const denoiser::DenoiserParams& model, const Tensor& z_t, double t_or_sigma,
                    const guidance::Embedding& cond, const denoiser::ControlResiduals& control, double omega) {
    const Tensor cond_eps = denoiser::denoise_predict(model, z_t, t_or_sigma, cond, &control);
    const guidance::Embedding null_cond(model.config.emb_dim);
    const Tensor uncond_eps = denoiser::denoise_predict(model, z_t, t_or_sigma, null_cond, nullptr);
    Tensor out(cond_eps.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out[i] = (1.0 + omega) * cond_eps[i] - omega * uncond_eps[i];
    }
    return out;
}

Tensor sampler_step(const Tensor& z_t, const Tensor& eps_hat, double eta_t) {
    require_same_shape(z_t, eps_hat, "sampler_step");
    if (!(eta_t > 0.0)) throw std::invalid_argument("sampler_step: eta_t must be > 0");
    Tensor out(z_t.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = z_t[i] - eta_t * eps_hat[i];
    return out;
}

Tensor text_layout_mask(const guidance::PromptBundle& bundle, int channels, int height, int width) {
    Tensor mask({channels, height, width});
    for (const guidance::TextCue& cue : bundle.text_cues) {
        const auto cell = guidance::grid_cell_of_phrase(cue.pos);
        if (!cell) continue;
        const int x0 = cell->first * width / 3, x1 = (cell->first + 1) * width / 3;
        const int y0 = cell->second * height / 3, y1 = (cell->second + 1) * height / 3;
        for (int c = 0; c < channels; ++c)
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) mask.at3(c, y, x) = 1.0;
    }
    return mask;
}

Tensor run_sampler(const denoiser::DenoiserParams& model, const guidance::PromptBundle& bundle,
                   const Tensor& lr_hint, const SamplerConfig& cfg, const guidance::GuidanceSchedule& gsched,
                   double s_ctrl, const LatentCodec* codec) {
    cfg.validate();
    if (lr_hint.rank() != 3) throw std::invalid_argument("run_sampler: lr_hint must be [C,H,W]");

    const std::vector<double> sigmas = karras_sigma_ladder(cfg.num_steps, cfg.sigma_min, cfg.sigma_max, cfg.rho);

    const guidance::Embedding e_img_raw = guidance::encode_text(bundle.image_prompt());
    const guidance::Embedding e_txt_raw = guidance::encode_text(bundle.text_prompt());
    const guidance::Embedding e_img = denoiser::project_embedding(model, denoiser::Branch::Sr, e_img_raw);
    const guidance::Embedding e_txt = denoiser::project_embedding(model, denoiser::Branch::Txt, e_txt_raw);
    const Tensor txt_hint =
        text_layout_mask(bundle, model.config.hint_channels, lr_hint.dim(1), lr_hint.dim(2));

    Rng rng(cfg.seed);
    Tensor z(lr_hint.shape);
    for (double& v : z.data) v = cfg.sigma_max * rng.normal();

    for (int i = 0; i < cfg.num_steps; ++i) {
        const double sigma = sigmas[i];
        const double lambda = guidance::lambda_at(gsched, i, sigma);

        // The network always sees the variance-preserving scaling of the
        // current latent, matching the training-time forward process.
        const double c_in = 1.0 / std::sqrt(1.0 + sigma * sigma);
        Tensor z_in(z.shape);
        for (std::size_t j = 0; j < z.numel(); ++j) z_in[j] = z[j] * c_in;

        const denoiser::ControlResiduals r_sr =
            denoiser::control_branch_forward(model, denoiser::Branch::Sr, z_in, lr_hint, e_img_raw);
        const denoiser::ControlResiduals r_txt =
            denoiser::control_branch_forward(model, denoiser::Branch::Txt, z_in, txt_hint, e_txt_raw);
        const denoiser::ControlResiduals mixed = denoiser::mix_control_residuals(r_sr, r_txt, lambda, s_ctrl);

        const guidance::Embedding cond = guidance::fuse_embeddings(e_txt, e_img, lambda);
        const Tensor eps_hat = cfg_residual(model, z_in, sigma, cond, mixed, cfg.omega);

        z = sampler_step(z, eps_hat, sigma - sigmas[i + 1]);
        if (!all_finite(z)) {
            throw std::runtime_error("run_sampler: non-finite latent at step " + std::to_string(i));
        }
    }
    static const LatentCodec identity;
    return (codec ? codec : &identity)->decode(z);
}

}  // namespace glyphlab::diffusion
