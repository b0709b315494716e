#include "glyphlab/commands.hpp"

#include "glyphlab/checkpoint.hpp"
#include "glyphlab/dataset.hpp"
#include "glyphlab/parallel.hpp"
#include "glyphlab/plots.hpp"
#include "glyphlab/png_io.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace glyphlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kInferenceCaption = "a sign with printed text";

void require_empty_or_force(const std::string& dir, bool force) {
    if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
        throw ConfigError("output directory '" + dir + "' is not empty; pass --force to write into it");
    }
    fs::create_directories(dir);
}

void require_exists(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string(what) + " path is empty; set it in the config or options");
    if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

}  // namespace

void cmd_gen_corpus(const RunConfig& cfg, const std::string& out_dir, bool force) {
    require_empty_or_force(out_dir, force);
    const corpus::CorpusGenConfig gen = cfg.corpus_config();

    std::vector<corpus::CorpusSample> samples(static_cast<std::size_t>(gen.num_scenes) * 4);
    parallel_for(static_cast<std::size_t>(gen.num_scenes), [&](std::size_t i) {
        char id[16];
        std::snprintf(id, sizeof(id), "s%06zu", i);
        const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, mix_seed(gen.seed, i));
        auto quad = corpus::synthesize_quadrants(spec, gen.degradation, id);
        for (int q = 0; q < 4; ++q) samples[i * 4 + q] = std::move(quad[q]);
    });

    const std::string manifest = corpus::write_dataset(samples, out_dir);
    cfg.write_frozen(out_dir);

    std::array<int, 4> counts{};
    for (const auto& s : samples) counts[static_cast<int>(s.quadrant)]++;
    for (int q = 0; q < 4; ++q) {
        std::cout << guidance::quadrant_name(static_cast<guidance::Quadrant>(q)) << ": " << counts[q] << "\n";
    }
    std::cout << "manifest: " << manifest << "\n";
}

void cmd_train(const RunConfig& cfg, const std::string& out_dir) {
    const std::string dataset_path = cfg.get_string("train.dataset");
    require_exists(dataset_path, "train.dataset");
    const auto dataset = corpus::read_dataset(dataset_path);
    fs::create_directories(out_dir);
    cfg.write_frozen(out_dir);
    const training::TrainResult result =
        training::train_loop(dataset, cfg.train_config(), cfg.model_config(), out_dir, cfg.get_bool("train.resume"));
    std::cout << "checkpoint: " << result.checkpoint_path << "\n";
}

void cmd_super_resolve(const RunConfig& cfg, const SuperResolveArgs& args, const std::string& out_dir) {
    require_exists(args.checkpoint, "checkpoint");
    require_exists(args.input_png, "input image");
    fs::create_directories(out_dir);
    cfg.write_frozen(out_dir);

    const denoiser::DenoiserParams model = denoiser::load_checkpoint(args.checkpoint);
    const Image lr = read_png(args.input_png);
    const int factor = static_cast<int>(cfg.get_int("super_resolve.factor"));
    if (factor < 1) throw ConfigError("super_resolve.factor must be >= 1");
    const Image up = resize_bicubic(lr, lr.width * factor, lr.height * factor);

    std::vector<std::pair<std::string, guidance::NormalizedBox>> cues;
    std::string cue_source;
    if (!args.cues_json.empty()) {
        require_exists(args.cues_json, "cues file");
        std::ifstream f(args.cues_json);
        const json j = json::parse(f);
        for (const json& c : j) {
            const auto& b = c.at("box");
            cues.emplace_back(c.at("text").get<std::string>(),
                              guidance::NormalizedBox{b.at(0).get<double>(), b.at(1).get<double>(),
                                                      b.at(2).get<double>(), b.at(3).get<double>()});
        }
        cue_source = "user";
    } else {
        for (const auto& w : evaluation::ocr_oracle(up)) cues.emplace_back(w.text, w.box);
        cue_source = "oracle";
    }

    const guidance::PromptBundle bundle =
        guidance::build_prompt_bundle(kInferenceCaption, cues, guidance::guide_prompt_pos_hq());
    const diffusion::SamplerConfig sampler = cfg.sampler_config();
    const guidance::GuidanceSchedule schedule = cfg.guidance_schedule();
    const Tensor out_latent =
        diffusion::run_sampler(model, bundle, image_to_latent(up), sampler, schedule, cfg.get_float("guidance.s_ctrl"));
    const Image out = latent_to_image(out_latent);

    const std::string out_png = args.output_png.empty() ? (fs::path(out_dir) / "sr.png").string() : args.output_png;
    write_png(out_png, out);

    json sidecar;
    sidecar["cue_source"] = cue_source;
    json jc = json::array();
    for (const auto& cue : bundle.text_cues) jc.push_back({{"text", cue.text}, {"pos", cue.pos}});
    sidecar["cues"] = jc;
    sidecar["schedule"] = schedule.describe();
    sidecar["seed"] = sampler.seed;
    sidecar["omega"] = sampler.omega;
    sidecar["num_steps"] = sampler.num_steps;
    sidecar["guide_prompt"] = bundle.guide_prompt;
    std::ofstream sf(out_png + ".json");
    sf << sidecar.dump(2) << "\n";
    std::cout << "wrote " << out_png << "\n";
}

namespace {

std::vector<corpus::CorpusSample> load_eval_split(const RunConfig& cfg) {
    const std::string dataset_path = cfg.get_string("eval.dataset");
    require_exists(dataset_path, "eval.dataset");
    auto samples = corpus::read_dataset(dataset_path);
    auto split = evaluation::filter_quadrant(samples, guidance::quadrant_from_name(cfg.get_string("eval.quadrant")));
    const int limit = static_cast<int>(cfg.get_int("eval.limit"));
    if (limit > 0 && static_cast<int>(split.size()) > limit) split.resize(limit);
    if (split.empty()) throw std::runtime_error("evaluate: selected split is empty");
    return split;
}

denoiser::DenoiserParams load_eval_model(const RunConfig& cfg) {
    const std::string ckpt = cfg.get_string("eval.checkpoint");
    require_exists(ckpt, "eval.checkpoint");
    return denoiser::load_checkpoint(ckpt);
}

}  // namespace

void cmd_evaluate(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    cfg.write_frozen(out_dir);
    const auto split = load_eval_split(cfg);
    const auto model = load_eval_model(cfg);
    const evaluation::EvalResult res = evaluation::run_dual_axis_eval(model, split, cfg.eval_config());
    evaluation::write_eval_csv((fs::path(out_dir) / "eval.csv").string(), res.rows, res.report);
    evaluation::write_eval_json((fs::path(out_dir) / "eval.json").string(), res.report);
    std::printf("n=%d f1=%.4f charAcc=%.4f psnr=%.2f ssim=%.4f\n", res.report.n_images, res.report.f1,
                res.report.char_accuracy, res.report.psnr_db, res.report.ssim);
}

void cmd_ablate(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    cfg.write_frozen(out_dir);
    const auto split = load_eval_split(cfg);
    const auto model = load_eval_model(cfg);
    const evaluation::EvalConfig ecfg = cfg.eval_config();

    const auto ablation = evaluation::ablate_guidance(model, split, ecfg);
    std::vector<evaluation::EvalReport> ab_reports;
    for (const auto& r : ablation) ab_reports.push_back(r.report);
    {
        std::ofstream f(fs::path(out_dir) / "ablation.md");
        f << evaluation::reports_markdown_table(ab_reports, "guidance");
    }
    for (const auto& r : ablation) {
        const std::string stem = "ablation_" + r.report.masking;
        evaluation::write_eval_csv((fs::path(out_dir) / (stem + ".csv")).string(), r.rows, r.report);
        evaluation::write_eval_json((fs::path(out_dir) / (stem + ".json")).string(), r.report);
    }

    const auto schedules = evaluation::default_schedule_suite(ecfg.sampler.sigma_max);
    const auto sched_runs = evaluation::compare_schedules(model, split, ecfg, schedules);
    std::vector<evaluation::EvalReport> sched_reports;
    for (const auto& r : sched_runs) sched_reports.push_back(r.report);
    {
        std::ofstream f(fs::path(out_dir) / "schedules.md");
        f << evaluation::reports_markdown_table(sched_reports, "schedule");
    }
    for (std::size_t i = 0; i < sched_runs.size(); ++i) {
        std::string stem = "schedule_" + sched_reports[i].schedule;
        for (char& c : stem) {
            if (c == '(' || c == ')' || c == '=' || c == ',' || c == '.') c = '_';
        }
        evaluation::write_eval_csv((fs::path(out_dir) / (stem + ".csv")).string(), sched_runs[i].rows,
                                   sched_runs[i].report);
        evaluation::write_eval_json((fs::path(out_dir) / (stem + ".json")).string(), sched_runs[i].report);
    }
    std::cout << evaluation::reports_markdown_table(ab_reports, "guidance") << "\n"
              << evaluation::reports_markdown_table(sched_reports, "schedule");
}

void cmd_plot(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    cfg.write_frozen(out_dir);
    const std::string run_dir = cfg.get_string("plot.run_dir");
    const std::string dataset = cfg.get_string("plot.dataset");
    bool produced = false;

    if (!run_dir.empty() && fs::exists(fs::path(run_dir) / "loss.csv")) {
        std::ifstream f(fs::path(run_dir) / "loss.csv");
        std::string line;
        std::getline(f, line);  // header
        plots::Series a{"PHASE A", {}, {}}, b{"PHASE B", {}, {}};
        while (std::getline(f, line)) {
            const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos) continue;
            const double step = std::stod(line.substr(0, c1));
            const std::string phase = line.substr(c1 + 1, c2 - c1 - 1);
            const double loss = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
            plots::Series& s = phase == "A" ? a : b;
            s.x.push_back(step);
            s.y.push_back(loss);
        }
        std::vector<plots::Series> series;
        if (!a.x.empty()) series.push_back(std::move(a));
        if (!b.x.empty()) series.push_back(std::move(b));
        if (!series.empty()) {
            write_png((fs::path(out_dir) / "loss_curve.png").string(), plots::line_chart(series, "STEP", "LOSS"));
            produced = true;
        }
    }

    if (!run_dir.empty() && fs::exists(run_dir)) {
        // Dual-axis scatter from any eval reports in the run dir.
        plots::Series pts{"RUNS", {}, {}};
        std::vector<fs::path> entries;
        for (const auto& e : fs::directory_iterator(run_dir)) entries.push_back(e.path());
        std::sort(entries.begin(), entries.end());
        for (const auto& p : entries) {
            if (p.extension() != ".json") continue;
            std::ifstream f(p);
            json j;
            try {
                j = json::parse(f);
            } catch (...) {
                continue;
            }
            if (j.contains("f1") && j.contains("psnr_db")) {
                pts.x.push_back(j["f1"].get<double>());
                pts.y.push_back(j["psnr_db"].get<double>());
            }
        }
        if (!pts.x.empty()) {
            write_png((fs::path(out_dir) / "dual_axis_scatter.png").string(),
                      plots::scatter_chart({pts}, "WORD F1", "PSNR DB"));
            produced = true;
        }
    }

    if (!dataset.empty()) {
        require_exists(dataset, "plot.dataset");
        const auto samples = corpus::read_dataset(dataset);
        std::vector<Image> tiles;
        for (std::size_t i = 0; i < samples.size() && tiles.size() < 24; ++i) tiles.push_back(samples[i].hr_image);
        if (!tiles.empty()) {
            write_png((fs::path(out_dir) / "quadrant_grid.png").string(), plots::image_grid(tiles, 4));
            produced = true;
        }
    }

    if (!produced) {
        throw std::runtime_error("plot: nothing to plot (no loss.csv, eval reports or dataset found)");
    }
    std::cout << "plots written to " << out_dir << "\n";
}

}  // namespace glyphlab::cli
