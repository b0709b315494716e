#pragma once

#include "glyphlab/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glyphlab::guidance {

// Dimension of the frozen hashed-trigram text encoder output.
inline constexpr int kEncoderDim = 256;

// The four guide prompts labeling the synthetic quadrants, plus the prompt
// templates, as exact strings so tests can assert wording.
const std::string& guide_prompt_pos_hq();
const std::string& guide_prompt_neg_hq();
const std::string& guide_prompt_pos_lq();
const std::string& guide_prompt_neg_lq();

// Cue sentence: "{TEXT} is displayed at the {POS} of the image", or
// "{TEXT} is displayed in the image" for the neutral position phrase.
inline constexpr const char* kNeutralPosition = "in the image";
std::string render_cue_sentence(const std::string& text, const std::string& pos);

struct Embedding {
    std::vector<double> v;

    Embedding() = default;
    explicit Embedding(int dim) : v(static_cast<std::size_t>(dim), 0.0) {}
    explicit Embedding(std::vector<double> data) : v(std::move(data)) {}

    int dim() const { return static_cast<int>(v.size()); }
    double norm() const;
};

struct TextCue {
    std::string text;
    std::string pos;  // one of the nine grid phrases, or kNeutralPosition
};

enum class Quadrant { PosHQ, NegHQ, PosLQ, NegLQ };

const char* quadrant_name(Quadrant q);            // "pos-HQ" etc.
Quadrant quadrant_from_name(const std::string&);  // throws on unknown name
const std::string& guide_prompt_for(Quadrant q);

struct PromptBundle {
    std::string scene_caption;
    std::vector<TextCue> text_cues;
    std::string guide_prompt;
    std::optional<Quadrant> quadrant;  // unset at inference

    // Full prompt strings fed to the encoders: the scene (image-branch)
    // prompt and the cue (text-branch) prompt, each with the guide prompt
    // appended with ", ".
    std::string image_prompt() const;
    std::string text_prompt() const;
};

struct NormalizedBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // in [0,1], x1 > x0, y1 > y0

    double cx() const { return 0.5 * (x0 + x1); }
    double cy() const { return 0.5 * (y0 + y1); }
    double area() const { return (x1 - x0) * (y1 - y0); }
};

double box_iou(const NormalizedBox& a, const NormalizedBox& b);

// Maps a box center into a 3x3 grid phrase ("top left" .. "bottom right").
// Coordinates exactly on a 1/3 boundary go to the lower-index cell.
// Throws on coordinates outside [0,1].
std::string verbalize_position(const NormalizedBox& box);

// Grid-cell indices (col, row in 0..2) for a position phrase; nullopt for
// the neutral phrase.
std::optional<std::pair<int, int>> grid_cell_of_phrase(const std::string& pos);

PromptBundle build_prompt_bundle(const std::string& caption,
                                 const std::vector<std::pair<std::string, NormalizedBox>>& cues,
                                 const std::string& guide);

// Frozen deterministic text encoder: lowercase, character trigrams hashed
// into kEncoderDim bins, L2-normalized. The empty bag maps to the zero
// vector.
Embedding encode_text(const std::string& s);

// Linear projection W (rows x cols), row-major. No bias.
struct Projection {
    int rows = 0, cols = 0;
    std::vector<double> w;

    Projection() = default;
    Projection(int r, int c) : rows(r), cols(c), w(static_cast<std::size_t>(r) * c, 0.0) {}
};

Embedding project(const Projection& W, const Embedding& e);

Embedding fuse_embeddings(const Embedding& e_txt, const Embedding& e_img, double lambda_t);

enum class ScheduleMode { PingPong, Constant, Ramp };

struct GuidanceSchedule {
    ScheduleMode mode = ScheduleMode::PingPong;
    int tau = 1;        // ping-pong toggle period
    int t0 = 0;         // ping-pong offset
    double value = 0.5;  // constant lambda
    double sigma_max = 10.0;  // ramp normalization

    static GuidanceSchedule pingpong(int tau = 1, int t0 = 0);
    static GuidanceSchedule constant(double lambda);
    static GuidanceSchedule ramp(double sigma_max);

    std::string describe() const;  // "pingpong(tau=1)", "constant(0.5)", "ramp"
};

// lambda_t: pingpong -> {0,1} by floor((t - t0)/tau) mod 2; constant -> value;
// ramp -> clamp(sigma_t / sigma_max, 0, 1).
double lambda_at(const GuidanceSchedule& sched, int t, double sigma_t);

}  // namespace glyphlab::guidance
