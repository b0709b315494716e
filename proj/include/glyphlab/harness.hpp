#pragma once

#include "glyphlab/metrics.hpp"
#include "glyphlab/model.hpp"
#include "glyphlab/ocr.hpp"
#include "glyphlab/sampler.hpp"
#include "glyphlab/synth.hpp"

#include <array>
#include <string>
#include <vector>

namespace glyphlab::evaluation {

// Where the text cues fed to the sampler come from: the ground-truth
// annotations, or the OCR oracle run on the bicubic-upsampled LR input
// (end-to-end mode; cues may be wrong).
enum class CueMode { GroundTruth, LrOracle };
const char* cue_mode_name(CueMode m);

// The four Fig.-5-style guidance settings.
enum class CueMasking { Both, TextOnly, PositionOnly, None };
const char* cue_masking_name(CueMasking m);

// Placeholder used for the position-only setting.
inline constexpr const char* kTextPlaceholder = "TEXT";

struct EvalConfig {
    diffusion::SamplerConfig sampler;
    guidance::GuidanceSchedule schedule = guidance::GuidanceSchedule::pingpong(1);
    CueMode cue_mode = CueMode::GroundTruth;
    double s_ctrl = 1.0;
    OcrConfig ocr;
    std::uint64_t seed = 0;  // mixed with sample ids into per-image seeds
};

struct EvalReport {
    double precision = 0, recall = 0, f1 = 0;
    double char_accuracy = 0;
    double mean_edit_distance = 0;
    double psnr_db = 0, ssim = 0, sharpness = 0;
    int n_images = 0;
    std::string cue_mode, schedule, masking;
};

struct PerImageRow {
    std::string sample_id;
    std::string quadrant;
    double precision = 0, recall = 0, f1 = 0;
    double char_accuracy = 0, edit_distance = 0;
    double psnr_db = 0, ssim = 0, sharpness = 0;
};

struct EvalResult {
    EvalReport report;
    std::vector<PerImageRow> rows;
};

std::vector<corpus::CorpusSample> filter_quadrant(const std::vector<corpus::CorpusSample>& samples,
                                                  guidance::Quadrant q);

// Builds the inference prompt bundle for one sample under a masking setting.
// The guide prompt is always the pos-HQ wording.
guidance::PromptBundle inference_bundle(const corpus::CorpusSample& sample, const EvalConfig& cfg,
                                        CueMasking masking);

// Super-resolves every sample in the split and scores OCR metrics against
// the annotations and image metrics against the sample's HR image.
// Per-image work is parallel; per-image seeds derive from sample ids, so
// results are order- and thread-independent. Throws on an empty split.
EvalResult run_dual_axis_eval(const denoiser::DenoiserParams& model, const std::vector<corpus::CorpusSample>& split,
                              const EvalConfig& cfg, CueMasking masking = CueMasking::Both);

// Four paired runs: both, text-only, position-only, none. Only the bundle
// construction differs.
std::array<EvalResult, 4> ablate_guidance(const denoiser::DenoiserParams& model,
                                          const std::vector<corpus::CorpusSample>& split, const EvalConfig& cfg);

// One paired run per schedule (same split, seeds and sampler config).
std::vector<EvalResult> compare_schedules(const denoiser::DenoiserParams& model,
                                          const std::vector<corpus::CorpusSample>& split, const EvalConfig& cfg,
                                          const std::vector<guidance::GuidanceSchedule>& schedules);

std::vector<guidance::GuidanceSchedule> default_schedule_suite(double sigma_max);

void write_eval_csv(const std::string& path, const std::vector<PerImageRow>& rows, const EvalReport& meta);
void write_eval_json(const std::string& path, const EvalReport& report);
std::string reports_markdown_table(const std::vector<EvalReport>& reports, const std::string& label_header);

}  // namespace glyphlab::evaluation
