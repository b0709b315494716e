#pragma once

#include "glyphlab/config.hpp"

#include <string>

namespace glyphlab::cli {

// Commands throw ConfigError for usage/config problems and other exceptions
// for runtime failures; the CLI maps these to exit codes 1 and 2.

void cmd_gen_corpus(const RunConfig& cfg, const std::string& out_dir, bool force);
void cmd_train(const RunConfig& cfg, const std::string& out_dir);

struct SuperResolveArgs {
    std::string input_png;
    std::string cues_json;  // optional; empty = run the OCR oracle on the input
    std::string checkpoint;
    std::string output_png;  // optional; default <out_dir>/sr.png
};
void cmd_super_resolve(const RunConfig& cfg, const SuperResolveArgs& args, const std::string& out_dir);

void cmd_evaluate(const RunConfig& cfg, const std::string& out_dir);
void cmd_ablate(const RunConfig& cfg, const std::string& out_dir);
void cmd_plot(const RunConfig& cfg, const std::string& out_dir);

}  // namespace glyphlab::cli
