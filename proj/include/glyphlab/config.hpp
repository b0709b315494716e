#pragma once

#include "glyphlab/guidance.hpp"
#include "glyphlab/harness.hpp"
#include "glyphlab/model.hpp"
#include "glyphlab/schedule.hpp"
#include "glyphlab/synth.hpp"
#include "glyphlab/toml.hpp"
#include "glyphlab/train.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace glyphlab::cli {

// Raised for usage/config mistakes (exit code 1, vs 2 for runtime failures).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The merged configuration tree: built-in defaults, then an optional TOML
// file, then --set overrides, then --seed. Unknown keys are a hard error.
class RunConfig {
public:
    static RunConfig load(const std::string& config_path, const std::vector<std::string>& overrides,
                          std::int64_t seed_override /* <0 = keep */);

    const toml::Document& doc() const { return doc_; }

    std::int64_t get_int(const std::string& key) const;
    double get_float(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::vector<int> get_int_array(const std::string& key) const;

    std::uint64_t resolved_seed() const { return static_cast<std::uint64_t>(get_int("seed")); }

    // Typed section views.
    corpus::CorpusGenConfig corpus_config() const;
    denoiser::ModelConfig model_config() const;
    training::TrainConfig train_config() const;
    diffusion::SamplerConfig sampler_config() const;
    guidance::GuidanceSchedule guidance_schedule() const;
    evaluation::EvalConfig eval_config() const;

    // Writes the fully resolved document to <dir>/config.toml.
    void write_frozen(const std::string& dir) const;

private:
    toml::Document doc_;
};

toml::Document default_config();

}  // namespace glyphlab::cli
