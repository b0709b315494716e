#include "glyphlab/train.hpp"

#include "glyphlab/checkpoint.hpp"
#include "glyphlab/parallel.hpp"
#include "glyphlab/sampler.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace glyphlab::training {

namespace fs = std::filesystem;
using nlohmann::json;

void TrainConfig::validate() const {
    if (a_steps() < 0 || b_steps() < 0 || a_steps() + b_steps() < 1) {
        throw std::invalid_argument("TrainConfig: need at least one training step");
    }
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be > 0");
    if (!(cond_dropout_p >= 0.0 && cond_dropout_p < 1.0)) {
        throw std::invalid_argument("TrainConfig: cond_dropout_p must be in [0,1)");
    }
    if (!(s_ctrl > 0.0)) throw std::invalid_argument("TrainConfig: s_ctrl must be > 0");
    if (T < 1) throw std::invalid_argument("TrainConfig: T must be >= 1");
    if (checkpoint_every < 1) throw std::invalid_argument("TrainConfig: checkpoint_every must be >= 1");
}

denoiser::TrainSample make_train_sample(const corpus::CorpusSample& s, int t, const Tensor& eps,
                                        const diffusion::NoiseSchedule& sched, bool drop, bool zero_text,
                                        double s_ctrl) {
    denoiser::TrainSample ts;
    const Tensor z0 = image_to_latent(s.hr_image);
    ts.z_t = diffusion::forward_noise(z0, t, eps, sched);
    ts.sigma = sched.sigma(t);
    ts.eps_target = eps;
    ts.drop_conditioning = drop;
    ts.lambda = 0.5;
    ts.s_ctrl = s_ctrl;
    if (!drop) {
        const Image up = resize_bicubic(s.lr_image, s.hr_image.width, s.hr_image.height);
        ts.sr_hint = image_to_latent(up);
        guidance::PromptBundle bundle = s.bundle;
        if (zero_text) {
            ts.e_img_raw = guidance::encode_text(bundle.image_prompt());
            ts.e_txt_raw = guidance::Embedding(guidance::kEncoderDim);
            ts.txt_hint = Tensor({3, s.hr_image.height, s.hr_image.width});
        } else {
            ts.e_img_raw = guidance::encode_text(bundle.image_prompt());
            ts.e_txt_raw = guidance::encode_text(bundle.text_prompt());
            ts.txt_hint = diffusion::text_layout_mask(bundle, 3, s.hr_image.height, s.hr_image.width);
        }
        ts.zero_text_conditioning = zero_text;
    }
    return ts;
}

double training_step(denoiser::DenoiserParams& params, OptState& opt, const std::vector<PreparedBatchItem>& batch,
                     const diffusion::NoiseSchedule& sched, const TrainConfig& cfg, Rng& rng) {
    if (batch.empty()) throw std::invalid_argument("training_step: batch must be non-empty");

    // Draw all per-item randomness from the shared stream up front so the
    // parallel section has no RNG ordering dependence.
    struct ItemDraw {
        int t;
        Tensor eps;
        bool drop;
    };
    std::vector<ItemDraw> draws(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        draws[i].t = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.T)));
        const Image& hr = batch[i].sample->hr_image;
        draws[i].eps = Tensor({3, hr.height, hr.width});
        for (double& v : draws[i].eps.data) v = rng.normal();
        draws[i].drop = rng.bernoulli(cfg.cond_dropout_p);
    }

    std::vector<double> losses(batch.size(), 0.0);
    std::vector<std::map<std::string, Tensor>> grad_parts(batch.size());

    parallel_for(batch.size(), [&](std::size_t i) {
        const denoiser::TrainSample ts = make_train_sample(*batch[i].sample, draws[i].t, draws[i].eps, sched,
                                                           draws[i].drop, batch[i].zero_text_conditioning, cfg.s_ctrl);
        denoiser::Tape tape;
        denoiser::GraphBuilder gb(tape, params, /*train_mode=*/true);
        denoiser::NodePtr loss = denoiser::training_loss_graph(gb, ts);
        losses[i] = loss->value[0];
        tape.backward(loss);
        for (const auto& [name, node] : gb.cache) {
            if (node->requires_grad && !node->grad.empty()) grad_parts[i][name] = node->grad;
        }
    });

    params.zero_grads();
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (const auto& [name, grad] : grad_parts[i]) {
            Tensor& acc = params.at(name).grad;
            for (std::size_t j = 0; j < grad.numel(); ++j) acc[j] += grad[j] * inv_batch;
        }
    }

    double loss = 0.0;
    for (double l : losses) loss += l;
    loss *= inv_batch;
    if (!std::isfinite(loss)) {
        throw std::runtime_error("training_step: non-finite loss (mean=" + std::to_string(loss) + ")");
    }

    OptConfig ocfg;
    ocfg.lr = cfg.lr;
    adamw_update(params, opt, ocfg);
    return loss;
}

namespace {

struct TrainerState {
    std::string phase = "A";  // "A" or "B"
    int step_in_phase = 0;
    long long global_step = 0;
    std::string rng_state;
};

void save_trainer_state(const std::string& dir, const TrainerState& st) {
    json j = {{"phase", st.phase},
              {"step_in_phase", st.step_in_phase},
              {"global_step", st.global_step},
              {"rng_state", st.rng_state}};
    std::ofstream f(fs::path(dir) / "trainer_state.json");
    if (!f) throw std::runtime_error("cannot write trainer_state.json in " + dir);
    f << j.dump(2) << "\n";
}

TrainerState load_trainer_state(const std::string& dir) {
    std::ifstream f(fs::path(dir) / "trainer_state.json");
    if (!f) throw std::runtime_error("cannot open trainer_state.json in " + dir);
    json j = json::parse(f);
    TrainerState st;
    st.phase = j.at("phase").get<std::string>();
    st.step_in_phase = j.at("step_in_phase").get<int>();
    st.global_step = j.at("global_step").get<long long>();
    st.rng_state = j.at("rng_state").get<std::string>();
    return st;
}

void write_resumable_checkpoint(const std::string& dir, const denoiser::DenoiserParams& params, const OptState& opt,
                                const TrainerState& st) {
    // Atomic: write into a temp dir, then rename over the target.
    const fs::path target(dir);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    fs::remove_all(tmp);
    denoiser::save_checkpoint(tmp.string(), params);
    save_opt_state((tmp / "opt_state.bin").string(), opt);
    save_trainer_state(tmp.string(), st);
    fs::remove_all(target);
    fs::rename(tmp, target);
}

}  // namespace

TrainResult train_loop(const std::vector<corpus::CorpusSample>& dataset, const TrainConfig& cfg,
                       const denoiser::ModelConfig& model_cfg, const std::string& out_dir, bool resume) {
    cfg.validate();
    if (dataset.empty()) throw std::runtime_error("train_loop: dataset is empty");
    {
        bool have[4] = {false, false, false, false};
        for (const auto& s : dataset) have[static_cast<int>(s.quadrant)] = true;
        for (int q = 0; q < 4; ++q) {
            if (!have[q]) {
                throw std::runtime_error(std::string("train_loop: dataset is missing quadrant ") +
                                         guidance::quadrant_name(static_cast<guidance::Quadrant>(q)));
            }
        }
    }
    fs::create_directories(out_dir);
    const std::string ckpt_dir = (fs::path(out_dir) / "checkpoint").string();
    const diffusion::NoiseSchedule sched = diffusion::build_noise_schedule(cfg.T, cfg.beta_start, cfg.beta_end);

    // Phase pools: A uses the pos quadrants, B all four.
    std::vector<const corpus::CorpusSample*> pool_a, pool_b;
    for (const auto& s : dataset) {
        if (s.quadrant == guidance::Quadrant::PosHQ || s.quadrant == guidance::Quadrant::PosLQ) {
            pool_a.push_back(&s);
        }
        pool_b.push_back(&s);
    }

    denoiser::DenoiserParams params;
    OptState opt;
    TrainerState st;
    Rng rng(cfg.seed);
    if (resume && fs::exists(fs::path(ckpt_dir) / "trainer_state.json")) {
        params = denoiser::load_checkpoint(ckpt_dir);
        opt = load_opt_state((fs::path(ckpt_dir) / "opt_state.bin").string());
        st = load_trainer_state(ckpt_dir);
        rng.deserialize(st.rng_state);
    } else {
        params = denoiser::init_model_params(model_cfg, mix_seed(cfg.seed, "model-init"));
        params.apply_phase_a_freeze();
        opt = init_opt_state(params);
    }

    std::ofstream loss_csv;
    const fs::path loss_path = fs::path(out_dir) / "loss.csv";
    const bool fresh_csv = !fs::exists(loss_path) || !resume;
    loss_csv.open(loss_path, fresh_csv ? std::ios::trunc : std::ios::app);
    if (!loss_csv) throw std::runtime_error("train_loop: cannot open " + loss_path.string());
    if (fresh_csv) loss_csv << "step,phase,loss,lr\n";

    TrainResult result;
    auto run_phase = [&](const char* phase, int total_steps, const std::vector<const corpus::CorpusSample*>& pool) {
        const bool phase_a = phase[0] == 'A';
        for (; st.step_in_phase < total_steps; ++st.step_in_phase) {
            std::vector<PreparedBatchItem> batch(static_cast<std::size_t>(cfg.batch_size));
            for (auto& item : batch) {
                item.sample = pool[rng.uniform_int(pool.size())];
                item.zero_text_conditioning = phase_a;
            }
            const double loss = training_step(params, opt, batch, sched, cfg, rng);
            result.losses.push_back(loss);
            ++st.global_step;
            loss_csv << st.global_step << "," << phase << "," << loss << "," << cfg.lr << "\n";
            loss_csv.flush();
            if (st.global_step % cfg.checkpoint_every == 0) {
                st.rng_state = rng.serialize();
                TrainerState next = st;
                ++next.step_in_phase;  // resume continues after this step
                write_resumable_checkpoint(ckpt_dir, params, opt, next);
            }
        }
    };

    if (st.phase == "A") {
        run_phase("A", cfg.a_steps(), pool_a);
        st.phase = "B";
        st.step_in_phase = 0;
        params.apply_phase_b_freeze();
        opt = init_opt_state(params);
    }
    run_phase("B", cfg.b_steps(), pool_b);

    st.rng_state = rng.serialize();
    write_resumable_checkpoint(ckpt_dir, params, opt, st);
    result.checkpoint_path = ckpt_dir;
    return result;
}

}  // namespace glyphlab::training
