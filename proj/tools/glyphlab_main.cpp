#include "glyphlab/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"glyphlab: text-guided diffusion super-resolution lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    std::string out_dir;
    bool force = false;

    auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
        cmd->add_option("--config", config_path, "TOML config file");
        cmd->add_option("--set", overrides, "dotted-key overrides, e.g. train.lr=1e-3")->take_all();
        cmd->add_option("--seed", seed, "override the resolved seed");
        auto* out = cmd->add_option("--out", out_dir, "output directory");
        if (needs_out) out->required();
        cmd->add_flag("--force", force, "allow writing into a non-empty output directory");
    };

    CLI::App* gen = app.add_subcommand("gen-corpus", "synthesize the four-quadrant corpus");
    add_common(gen);
    CLI::App* train = app.add_subcommand("train", "run the two-phase training loop");
    add_common(train);

    glyphlab::cli::SuperResolveArgs sr_args;
    CLI::App* sr = app.add_subcommand("super-resolve", "super-resolve one LR image");
    add_common(sr);
    sr->add_option("--input", sr_args.input_png, "LR input PNG")->required();
    sr->add_option("--cues", sr_args.cues_json, "JSON cue list (omiting runs the OCR oracle on the input)");
    sr->add_option("--checkpoint", sr_args.checkpoint, "model checkpoint directory")->required();
    sr->add_option("--output-image", sr_args.output_png, "output PNG path (default <out>/sr.png)");

    CLI::App* eval = app.add_subcommand("evaluate", "dual-axis evaluation of a checkpoint");
    add_common(eval);
    CLI::App* ablate = app.add_subcommand("ablate", "guidance ablation and scheduler comparison");
    add_common(ablate);
    CLI::App* plot = app.add_subcommand("plot", "render loss curves, scatter and sample grids");
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const glyphlab::cli::RunConfig cfg = glyphlab::cli::RunConfig::load(config_path, overrides, seed);
        if (gen->parsed()) {
            glyphlab::cli::cmd_gen_corpus(cfg, out_dir, force);
        } else if (train->parsed()) {
            glyphlab::cli::cmd_train(cfg, out_dir);
        } else if (sr->parsed()) {
            glyphlab::cli::cmd_super_resolve(cfg, sr_args, out_dir);
        } else if (eval->parsed()) {
            glyphlab::cli::cmd_evaluate(cfg, out_dir);
        } else if (ablate->parsed()) {
            glyphlab::cli::cmd_ablate(cfg, out_dir);
        } else if (plot->parsed()) {
            glyphlab::cli::cmd_plot(cfg, out_dir);
        }
    } catch (const glyphlab::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
