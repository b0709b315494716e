#pragma once

#include "glyphlab/guidance.hpp"
#include "glyphlab/image.hpp"
#include "glyphlab/rng.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphlab::corpus {

struct LayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackgroundSpec {
    enum class Kind { Flat, GradientH, GradientV, Textured };
    Kind kind = Kind::Flat;
    std::array<double, 3> color_a{0.5, 0.5, 0.5};
    std::array<double, 3> color_b{0.5, 0.5, 0.5};
    int num_shapes = 0;  // low-contrast decorative rectangles/discs
};

struct WordPlacement {
    std::string text;  // uppercase A-Z/0-9, from the embedded word list
    int grid_cell = 4;  // row*3 + col in the 3x3 grid
    int scale = 2;      // font scale; glyphs are 5s x 7s pixels
    std::array<double, 3> color{0.0, 0.0, 0.0};
};

struct SceneSpec {
    BackgroundSpec background;
    std::vector<WordPlacement> words;  // 1..3, non-overlapping boxes
    int canvas = 64;
    std::uint64_t rng_seed = 0;
};

struct Annotation {
    std::string text;
    guidance::NormalizedBox box;
};

struct RenderResult {
    Image image;
    std::vector<Annotation> annotations;
};

// Deterministic given spec.rng_seed. Word centers land inside the word's
// grid cell by construction. Throws LayoutError when the words cannot be
// placed without overlap (caller resamples the spec).
RenderResult render_scene(const SceneSpec& spec);

// Deterministic scene caption derived from the background descriptor.
std::string scene_caption(const SceneSpec& spec);

// Damages glyphs inside the annotated boxes only: ~30% character
// substitutions re-rendered in place, per-glyph position jitter up to
// +-2 px, and a local elastic warp. Pixels outside every box are
// bit-identical to the input. Throws on empty annotations.
Image corrupt_glyphs(const Image& image, const std::vector<Annotation>& annotations, Rng& rng);

struct DegradationConfig {
    double blur_sigma_min = 1.0;
    double blur_sigma_max = 2.0;
    double noise_std = 0.04;
    int downsample_factor = 4;
    bool jpeg_like_quantization = false;

    void validate() const;
};

// Global quality reduction: Gaussian blur (sigma sampled from the range),
// box downsample by the factor, bicubic upsample back, additive Gaussian
// noise, clamp, 8-bit quantize.
Image degrade_image(const Image& image, const DegradationConfig& cfg, Rng& rng);

// The paired low-resolution input: blur, downsample by the factor, noise at
// LR scale. Output is canvas/factor square.
Image make_lr_image(const Image& hr, const DegradationConfig& cfg, Rng& rng);

struct CorpusSample {
    std::string sample_id;
    guidance::Quadrant quadrant = guidance::Quadrant::PosHQ;
    Image hr_image;  // canvas-sized image of this quadrant
    Image lr_image;  // canvas/factor
    int scale_factor = 4;
    std::vector<Annotation> annotations;  // always from the pos-HQ rendering
    guidance::PromptBundle bundle;
};

// pos-HQ = clean render, neg-HQ = corrupted glyphs, pos-LQ = degraded clean,
// neg-LQ = degraded corrupted. All four share annotations and text cues from
// the pos-HQ rendering and carry their quadrant's guide prompt.
std::array<CorpusSample, 4> synthesize_quadrants(const SceneSpec& spec, const DegradationConfig& cfg,
                                                 const std::string& sample_id);

struct CorpusGenConfig {
    int num_scenes = 500;
    int min_words = 1;
    int max_words = 2;
    std::uint64_t seed = 0;
    DegradationConfig degradation;

    void validate() const;
};

// Samples a feasible SceneSpec (retries internally on layout failures).
SceneSpec sample_scene_spec(const CorpusGenConfig& cfg, std::uint64_t scene_seed);

}  // namespace glyphlab::corpus
