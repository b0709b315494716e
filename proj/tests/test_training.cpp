#include "glyphlab/checkpoint.hpp"
#include "glyphlab/train.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

using namespace glyphlab;
using namespace glyphlab::training;

namespace {

denoiser::ModelConfig toy_config() {
    denoiser::ModelConfig cfg;
    cfg.levels = 2;
    cfg.widths = {4, 8};
    cfg.emb_dim = 8;
    cfg.time_emb_dim = 8;
    return cfg;
}

std::vector<corpus::CorpusSample> toy_dataset(int scenes) {
    corpus::CorpusGenConfig gen;
    gen.num_scenes = scenes;
    std::vector<corpus::CorpusSample> out;
    for (int i = 0; i < scenes; ++i) {
        const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, mix_seed(777, static_cast<std::uint64_t>(i)));
        char id[16];
        std::snprintf(id, sizeof(id), "s%06d", i);
        for (auto& s : corpus::synthesize_quadrants(spec, gen.degradation, id)) out.push_back(std::move(s));
    }
    return out;
}

std::vector<PreparedBatchItem> make_batch(const std::vector<corpus::CorpusSample>& ds, int n, bool zero_text) {
    std::vector<PreparedBatchItem> batch;
    for (int i = 0; i < n; ++i) batch.push_back({&ds[static_cast<std::size_t>(i) % ds.size()], zero_text});
    return batch;
}

}  // namespace

TEST_CASE("training_step: frozen parameters stay byte-identical") {
    const auto ds = toy_dataset(2);
    denoiser::DenoiserParams params = denoiser::init_model_params(toy_config(), 31);
    // Emulate a post-phase-A state: the zero-initialized output layers have
    // moved, so gradients reach the trainable groups.
    Rng wiggle(99);
    for (auto& [name, entry] : params.tensors) {
        for (double& v : entry.value.data) v += 0.02 * wiggle.normal();
    }
    params.apply_phase_b_freeze();
    OptState opt = init_opt_state(params);

    std::map<std::string, Tensor> before;
    for (const auto& [name, entry] : params.tensors) before[name] = entry.value;

    TrainConfig cfg;
    cfg.batch_size = 2;
    cfg.T = 50;
    const diffusion::NoiseSchedule sched = diffusion::build_noise_schedule(cfg.T, 1e-4, 0.05);
    Rng rng(5);
    bool txt_changed = false;
    for (int step = 0; step < 3; ++step) {
        const double loss = training_step(params, opt, make_batch(ds, cfg.batch_size, false), sched, cfg, rng);
        CHECK(std::isfinite(loss));
    }
    for (const auto& [name, entry] : params.tensors) {
        if (entry.frozen) {
            REQUIRE(entry.value.numel() == before[name].numel());
            CHECK(std::memcmp(entry.value.ptr(), before[name].ptr(), entry.value.numel() * sizeof(double)) == 0);
        } else if (std::memcmp(entry.value.ptr(), before[name].ptr(), entry.value.numel() * sizeof(double)) != 0) {
            txt_changed = true;
        }
    }
    CHECK(txt_changed);
}

TEST_CASE("zero-output model loss is about 1 per element") {
    // At init the head conv is zero, so D == 0 without control injection;
    // the epsilon-prediction loss reduces to E||eps||^2 / n ~= 1.
    const auto ds = toy_dataset(2);
    denoiser::DenoiserParams params = denoiser::init_model_params(toy_config(), 37);
    for (auto& [name, entry] : params.tensors) entry.value.fill(0.0);
    params.apply_phase_b_freeze();
    OptState opt = init_opt_state(params);
    TrainConfig cfg;
    cfg.batch_size = 8;
    cfg.lr = 0.0;  // measure only
    cfg.cond_dropout_p = 0.0;
    const diffusion::NoiseSchedule sched = diffusion::build_noise_schedule(cfg.T, 1e-4, 0.05);
    Rng rng(6);
    double total = 0.0;
    const int reps = 8;
    for (int i = 0; i < reps; ++i) total += training_step(params, opt, make_batch(ds, cfg.batch_size, false), sched, cfg, rng);
    CHECK(total / reps == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("perfect prediction gives zero loss") {
    // The MSE path of the loss graph: identical prediction and target.
    denoiser::Tape tape;
    Tensor eps({3, 4, 4});
    Rng rng(7);
    for (double& v : eps.data) v = rng.normal();
    const auto pred = tape.leaf(eps, false);
    CHECK(tape.mse(pred, eps)->value[0] == 0.0);
}

TEST_CASE("conditioning dropout frequency tracks the configured rate") {
    // Counter-based: the dropout decision stream at p = 0.1 over 10^4
    // draws stays within +-2 percentage points.
    Rng rng(8);
    const double p = 0.1;
    int dropped = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(p)) ++dropped;
    }
    CHECK(std::abs(static_cast<double>(dropped) / n - p) < 0.02);
}

TEST_CASE("train_loop: phases, loss log, resume determinism") {
    const auto ds = toy_dataset(2);
    TrainConfig cfg;
    cfg.phase_a_steps = 2;
    cfg.phase_b_steps = 3;
    cfg.batch_size = 2;
    cfg.checkpoint_every = 2;
    cfg.seed = 11;
    const std::string dir = (std::filesystem::temp_directory_path() / "glyphlab_train_test").string();
    std::filesystem::remove_all(dir);

    const TrainResult r1 = train_loop(ds, cfg, toy_config(), dir);
    CHECK(r1.losses.size() == 5);
    CHECK(std::filesystem::exists(r1.checkpoint_path + "/manifest.json"));
    {
        std::ifstream f(dir + "/loss.csv");
        REQUIRE(f.good());
        std::string line;
        int lines = 0;
        while (std::getline(f, line)) ++lines;
        CHECK(lines == 6);  // header + 5 steps
    }

    // Phase-B freeze structure in the final checkpoint.
    const denoiser::DenoiserParams final_params = denoiser::load_checkpoint(r1.checkpoint_path);
    for (const auto& [name, entry] : final_params.tensors) {
        const bool expect_frozen = entry.group == denoiser::ParamGroup::Backbone ||
                                   entry.group == denoiser::ParamGroup::SrBranch;
        CHECK(entry.frozen == expect_frozen);
    }

    // A fresh run with the same seed reproduces the same losses.
    const std::string dir2 = dir + "_repro";
    std::filesystem::remove_all(dir2);
    const TrainResult r2 = train_loop(ds, cfg, toy_config(), dir2);
    REQUIRE(r2.losses.size() == r1.losses.size());
    for (std::size_t i = 0; i < r1.losses.size(); ++i) CHECK(r1.losses[i] == r2.losses[i]);

    // Resuming from the final checkpoint with more phase-B steps appends to
    // the loss log and runs deterministically.
    TrainConfig longer = cfg;
    longer.phase_b_steps = 5;
    const TrainResult r3 = train_loop(ds, longer, toy_config(), dir, /*resume=*/true);
    CHECK(r3.losses.size() == 2);  // two additional phase-B steps
    {
        std::ifstream f(dir + "/loss.csv");
        std::string line;
        int lines = 0;
        while (std::getline(f, line)) ++lines;
        CHECK(lines == 8);  // appended, not truncated
    }
    const TrainResult r3b = train_loop(ds, longer, toy_config(), dir2, /*resume=*/true);
    REQUIRE(r3b.losses.size() == r3.losses.size());
    for (std::size_t i = 0; i < r3.losses.size(); ++i) CHECK(r3.losses[i] == r3b.losses[i]);

    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("train_loop rejects incomplete datasets") {
    auto ds = toy_dataset(1);
    ds.erase(std::remove_if(ds.begin(), ds.end(),
                            [](const corpus::CorpusSample& s) { return s.quadrant == guidance::Quadrant::NegLQ; }),
             ds.end());
    TrainConfig cfg;
    cfg.phase_a_steps = 1;
    cfg.phase_b_steps = 1;
    const std::string dir = (std::filesystem::temp_directory_path() / "glyphlab_train_bad").string();
    std::filesystem::remove_all(dir);
    CHECK_THROWS_WITH_AS(train_loop(ds, cfg, toy_config(), dir), doctest::Contains("neg-LQ"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gradient check on the toy model (sampled scalars)") {
    // Full-coverage finite differences run in the acceptance suite; here a
    // random sample of trainable scalars guards the training path.
    const auto ds = toy_dataset(1);
    denoiser::DenoiserParams params = denoiser::init_model_params(toy_config(), 41);
    params.apply_phase_b_freeze();
    // Randomize every tensor (including the zero-initialized output layers,
    // which a phase-A run would have moved) so gradients flow everywhere.
    Rng wiggle(42);
    for (auto& [name, entry] : params.tensors) {
        for (double& v : entry.value.data) v += 0.02 * wiggle.normal();
    }

    const diffusion::NoiseSchedule sched = diffusion::build_noise_schedule(50, 1e-4, 0.05);
    Rng rng(43);
    Tensor eps({3, 64, 64});
    for (double& v : eps.data) v = rng.normal();
    const denoiser::TrainSample ts = make_train_sample(ds[0], 25, eps, sched, false, false, 1.0);

    auto loss_at = [&](const denoiser::DenoiserParams& p) {
        denoiser::Tape tape;
        denoiser::GraphBuilder gb(tape, p, false);
        return denoiser::training_loss_graph(gb, ts)->value[0];
    };

    denoiser::Tape tape;
    denoiser::GraphBuilder gb(tape, params, true);
    auto loss = denoiser::training_loss_graph(gb, ts);
    tape.backward(loss);
    params.zero_grads();
    denoiser::accumulate_param_grads(gb, params);

    Rng pick(44);
    int checked = 0;
    std::vector<std::string> names;
    for (const auto& [name, entry] : params.tensors) {
        if (!entry.frozen) names.push_back(name);
    }
    while (checked < 25) {
        const std::string& name = names[pick.uniform_int(names.size())];
        denoiser::ParamEntry& entry = params.at(name);
        const std::size_t idx = pick.uniform_int(entry.value.numel());
        const double h = 1e-4;
        const double orig = entry.value[idx];
        entry.value[idx] = orig + h;
        const double up = loss_at(params);
        entry.value[idx] = orig - h;
        const double down = loss_at(params);
        entry.value[idx] = orig;
        const double fd = (up - down) / (2.0 * h);
        const double an = entry.grad[idx];
        CHECK(std::abs(fd - an) <= std::max(1e-3 * std::max(std::abs(fd), std::abs(an)), 1e-7));
        ++checked;
    }
}
