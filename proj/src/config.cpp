#include "glyphlab/config.hpp"

#include <filesystem>

namespace glyphlab::cli {

namespace fs = std::filesystem;

toml::Document default_config() {
    toml::Document d;
    d["seed"] = toml::Value(0);

    d["corpus.num_scenes"] = toml::Value(500);
    d["corpus.min_words"] = toml::Value(1);
    d["corpus.max_words"] = toml::Value(2);
    d["corpus.blur_sigma_min"] = toml::Value(1.0);
    d["corpus.blur_sigma_max"] = toml::Value(2.0);
    d["corpus.noise_std"] = toml::Value(0.04);
    d["corpus.downsample_factor"] = toml::Value(4);
    d["corpus.jpeg_like_quantization"] = toml::Value(false);

    // Compact widths keep the default two-phase run within a desktop-CPU
    // hour; the library's ModelConfig itself defaults to [32,64,128].
    d["model.levels"] = toml::Value(3);
    d["model.widths"] = toml::Value(std::vector<toml::Value>{toml::Value(8), toml::Value(16), toml::Value(32)});
    d["model.emb_dim"] = toml::Value(64);
    d["model.time_emb_dim"] = toml::Value(64);

    d["train.dataset"] = toml::Value("");
    d["train.phase_a_steps"] = toml::Value(1200);
    d["train.phase_b_steps"] = toml::Value(1200);
    d["train.batch_size"] = toml::Value(6);
    d["train.lr"] = toml::Value(2e-4);
    d["train.cond_dropout_p"] = toml::Value(0.1);
    d["train.s_ctrl"] = toml::Value(1.0);
    d["train.T"] = toml::Value(200);
    d["train.checkpoint_every"] = toml::Value(400);
    d["train.beta_start"] = toml::Value(1e-4);
    d["train.beta_end"] = toml::Value(0.05);
    d["train.resume"] = toml::Value(false);

    d["sampler.num_steps"] = toml::Value(50);
    d["sampler.sigma_min"] = toml::Value(0.02);
    d["sampler.sigma_max"] = toml::Value(10.0);
    d["sampler.rho"] = toml::Value(7.0);
    d["sampler.omega"] = toml::Value(2.0);

    d["guidance.schedule"] = toml::Value("pingpong");
    d["guidance.tau"] = toml::Value(1);
    d["guidance.t0"] = toml::Value(0);
    d["guidance.lambda"] = toml::Value(0.5);
    d["guidance.s_ctrl"] = toml::Value(1.0);

    d["eval.dataset"] = toml::Value("");
    d["eval.checkpoint"] = toml::Value("");
    d["eval.quadrant"] = toml::Value("pos-HQ");
    d["eval.cue_mode"] = toml::Value("ground-truth");
    d["eval.limit"] = toml::Value(0);

    d["super_resolve.factor"] = toml::Value(4);

    d["plot.run_dir"] = toml::Value("");
    d["plot.dataset"] = toml::Value("");
    return d;
}

RunConfig RunConfig::load(const std::string& config_path, const std::vector<std::string>& overrides,
                          std::int64_t seed_override) {
    RunConfig cfg;
    cfg.doc_ = default_config();
    const toml::Document defaults = cfg.doc_;

    auto apply = [&](const std::string& key, const toml::Value& value, const std::string& origin) {
        if (!defaults.count(key)) {
            throw ConfigError("unknown config key '" + key + "' (" + origin + ")");
        }
        cfg.doc_[key] = value;
    };

    if (!config_path.empty()) {
        toml::Document file;
        try {
            file = toml::parse_file(config_path);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cannot parse config file: ") + e.what());
        }
        for (const auto& [key, value] : file) apply(key, value, "from " + config_path);
    }
    for (const std::string& kv : overrides) {
        try {
            const auto [key, value] = toml::parse_override(kv);
            apply(key, value, "from --set");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad --set override: ") + e.what());
        }
    }
    if (seed_override >= 0) cfg.doc_["seed"] = toml::Value(seed_override);
    return cfg;
}

namespace {

const toml::Value& fetch(const toml::Document& doc, const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

}  // namespace

std::int64_t RunConfig::get_int(const std::string& key) const {
    try {
        return fetch(doc_, key).as_int();
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

double RunConfig::get_float(const std::string& key) const {
    try {
        return fetch(doc_, key).as_float();
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

bool RunConfig::get_bool(const std::string& key) const {
    try {
        return fetch(doc_, key).as_bool();
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::string RunConfig::get_string(const std::string& key) const {
    try {
        return fetch(doc_, key).as_string();
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::vector<int> RunConfig::get_int_array(const std::string& key) const {
    try {
        std::vector<int> out;
        for (const toml::Value& v : fetch(doc_, key).as_array()) out.push_back(static_cast<int>(v.as_int()));
        return out;
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

corpus::CorpusGenConfig RunConfig::corpus_config() const {
    corpus::CorpusGenConfig c;
    c.num_scenes = static_cast<int>(get_int("corpus.num_scenes"));
    c.min_words = static_cast<int>(get_int("corpus.min_words"));
    c.max_words = static_cast<int>(get_int("corpus.max_words"));
    c.seed = resolved_seed();
    c.degradation.blur_sigma_min = get_float("corpus.blur_sigma_min");
    c.degradation.blur_sigma_max = get_float("corpus.blur_sigma_max");
    c.degradation.noise_std = get_float("corpus.noise_std");
    c.degradation.downsample_factor = static_cast<int>(get_int("corpus.downsample_factor"));
    c.degradation.jpeg_like_quantization = get_bool("corpus.jpeg_like_quantization");
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("corpus config: ") + e.what());
    }
    return c;
}

denoiser::ModelConfig RunConfig::model_config() const {
    denoiser::ModelConfig m;
    m.levels = static_cast<int>(get_int("model.levels"));
    m.widths = get_int_array("model.widths");
    m.emb_dim = static_cast<int>(get_int("model.emb_dim"));
    m.time_emb_dim = static_cast<int>(get_int("model.time_emb_dim"));
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    return m;
}

training::TrainConfig RunConfig::train_config() const {
    training::TrainConfig t;
    t.phase_a_steps = static_cast<int>(get_int("train.phase_a_steps"));
    t.phase_b_steps = static_cast<int>(get_int("train.phase_b_steps"));
    t.steps = t.phase_a_steps;
    t.batch_size = static_cast<int>(get_int("train.batch_size"));
    t.lr = get_float("train.lr");
    t.cond_dropout_p = get_float("train.cond_dropout_p");
    t.s_ctrl = get_float("train.s_ctrl");
    t.seed = resolved_seed();
    t.T = static_cast<int>(get_int("train.T"));
    t.checkpoint_every = static_cast<int>(get_int("train.checkpoint_every"));
    t.beta_start = get_float("train.beta_start");
    t.beta_end = get_float("train.beta_end");
    try {
        t.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
    return t;
}

diffusion::SamplerConfig RunConfig::sampler_config() const {
    diffusion::SamplerConfig s;
    s.num_steps = static_cast<int>(get_int("sampler.num_steps"));
    s.sigma_min = get_float("sampler.sigma_min");
    s.sigma_max = get_float("sampler.sigma_max");
    s.rho = get_float("sampler.rho");
    s.omega = get_float("sampler.omega");
    s.seed = resolved_seed();
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("sampler config: ") + e.what());
    }
    return s;
}

guidance::GuidanceSchedule RunConfig::guidance_schedule() const {
    const std::string mode = get_string("guidance.schedule");
    try {
        if (mode == "pingpong") {
            return guidance::GuidanceSchedule::pingpong(static_cast<int>(get_int("guidance.tau")),
                                                        static_cast<int>(get_int("guidance.t0")));
        }
        if (mode == "constant") return guidance::GuidanceSchedule::constant(get_float("guidance.lambda"));
        if (mode == "ramp") return guidance::GuidanceSchedule::ramp(get_float("sampler.sigma_max"));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("guidance config: ") + e.what());
    }
    throw ConfigError("guidance.schedule must be pingpong, constant or ramp (got '" + mode + "')");
}

evaluation::EvalConfig RunConfig::eval_config() const {
    evaluation::EvalConfig e;
    e.sampler = sampler_config();
    e.schedule = guidance_schedule();
    const std::string mode = get_string("eval.cue_mode");
    if (mode == "ground-truth") {
        e.cue_mode = evaluation::CueMode::GroundTruth;
    } else if (mode == "lr-oracle") {
        e.cue_mode = evaluation::CueMode::LrOracle;
    } else {
        throw ConfigError("eval.cue_mode must be ground-truth or lr-oracle (got '" + mode + "')");
    }
    e.s_ctrl = get_float("guidance.s_ctrl");
    e.seed = resolved_seed();
    return e;
}

void RunConfig::write_frozen(const std::string& dir) const {
    fs::create_directories(dir);
    toml::write_file((fs::path(dir) / "config.toml").string(), doc_);
}

}  // namespace glyphlab::cli
