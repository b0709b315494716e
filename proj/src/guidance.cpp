#include "glyphlab/guidance.hpp"

#include "glyphlab/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace glyphlab::guidance {

const std::string& guide_prompt_pos_hq() {
    static const std::string s =
        "Perfect image quality with perfectly preserved character outlines and precise positioning.";
    return s;
}

const std::string& guide_prompt_neg_hq() {
    static const std::string s =
        "Intentionally damaged character outlines and precise positioning, but good image quality.";
    return s;
}

const std::string& guide_prompt_pos_lq() {
    static const std::string s =
        "Poor image quality, but preserved character outlines and precise positioning.";
    return s;
}

const std::string& guide_prompt_neg_lq() {
    static const std::string s =
        "Image quality is poor and character outlines and exact positions are intentionally damaged.";
    return s;
}

std::string render_cue_sentence(const std::string& text, const std::string& pos) {
    if (pos == kNeutralPosition) return text + " is displayed in the image";
    return text + " is displayed at the " + pos + " of the image";
}

double Embedding::norm() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

const char* quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::PosHQ: return "pos-HQ";
        case Quadrant::NegHQ: return "neg-HQ";
        case Quadrant::PosLQ: return "pos-LQ";
        case Quadrant::NegLQ: return "neg-LQ";
    }
    throw std::logic_error("quadrant_name: bad enum");
}

Quadrant quadrant_from_name(const std::string& s) {
    if (s == "pos-HQ") return Quadrant::PosHQ;
    if (s == "neg-HQ") return Quadrant::NegHQ;
    if (s == "pos-LQ") return Quadrant::PosLQ;
    if (s == "neg-LQ") return Quadrant::NegLQ;
    throw std::invalid_argument("unknown quadrant name: " + s);
}

const std::string& guide_prompt_for(Quadrant q) {
    switch (q) {
        case Quadrant::PosHQ: return guide_prompt_pos_hq();
        case Quadrant::NegHQ: return guide_prompt_neg_hq();
        case Quadrant::PosLQ: return guide_prompt_pos_lq();
        case Quadrant::NegLQ: return guide_prompt_neg_lq();
    }
    throw std::logic_error("guide_prompt_for: bad enum");
}

std::string PromptBundle::image_prompt() const {
    if (guide_prompt.empty()) return scene_caption;
    if (scene_caption.empty()) return guide_prompt;
    return scene_caption + ", " + guide_prompt;
}

std::string PromptBundle::text_prompt() const {
    std::string cues;
    for (std::size_t i = 0; i < text_cues.size(); ++i) {
        if (i) cues += ". ";
        cues += render_cue_sentence(text_cues[i].text, text_cues[i].pos);
    }
    if (guide_prompt.empty()) return cues;
    if (cues.empty()) return guide_prompt;
    return cues + ", " + guide_prompt;
}

double box_iou(const NormalizedBox& a, const NormalizedBox& b) {
    const double ix0 = std::max(a.x0, b.x0);
    const double iy0 = std::max(a.y0, b.y0);
    const double ix1 = std::min(a.x1, b.x1);
    const double iy1 = std::min(a.y1, b.y1);
    const double iw = std::max(0.0, ix1 - ix0);
    const double ih = std::max(0.0, iy1 - iy0);
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

// 0, 1 or 2 for a coordinate in [0,1]; exact thirds go to the lower cell.
int grid_index(double v) {
    const double scaled = v * 3.0;
    if (scaled <= 1.0) return 0;
    if (scaled <= 2.0) return 1;
    return 2;
}

const char* kGridPhrases[3][3] = {
    {"top left", "top center", "top right"},
    {"center left", "center", "center right"},
    {"bottom left", "bottom center", "bottom right"},
};

}  // namespace

std::string verbalize_position(const NormalizedBox& box) {
    const double cx = box.cx();
    const double cy = box.cy();
    if (cx < 0.0 || cx > 1.0 || cy < 0.0 || cy > 1.0) {
        throw std::out_of_range("verbalize_position: box center outside [0,1]^2");
    }
    return kGridPhrases[grid_index(cy)][grid_index(cx)];
}

std::optional<std::pair<int, int>> grid_cell_of_phrase(const std::string& pos) {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (pos == kGridPhrases[r][c]) return std::make_pair(c, r);
    return std::nullopt;
}

PromptBundle build_prompt_bundle(const std::string& caption,
                                 const std::vector<std::pair<std::string, NormalizedBox>>& cues,
                                 const std::string& guide) {
    PromptBundle b;
    b.scene_caption = caption;
    b.guide_prompt = guide;
    b.text_cues.reserve(cues.size());
    for (const auto& [text, box] : cues) {
        b.text_cues.push_back({text, verbalize_position(box)});
    }
    return b;
}

Embedding encode_text(const std::string& s) {
    Embedding e(kEncoderDim);
    std::string lower;
    lower.reserve(s.size());
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower.size() >= 3) {
        for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
            const std::uint64_t h = fnv1a64(lower.substr(i, 3));
            e.v[h % kEncoderDim] += 1.0;
        }
    }
    const double n = e.norm();
    if (n > 0.0) {
        for (double& x : e.v) x /= n;
    }
    return e;
}

Embedding project(const Projection& W, const Embedding& e) {
    if (e.dim() != W.cols) {
        throw std::invalid_argument("project: embedding dim " + std::to_string(e.dim()) +
                                    " does not match projection cols " + std::to_string(W.cols));
    }
    Embedding out(W.rows);
    for (int r = 0; r < W.rows; ++r) {
        double s = 0.0;
        const double* row = &W.w[static_cast<std::size_t>(r) * W.cols];
        for (int c = 0; c < W.cols; ++c) s += row[c] * e.v[c];
        out.v[r] = s;
    }
    return out;
}

Embedding fuse_embeddings(const Embedding& e_txt, const Embedding& e_img, double lambda_t) {
    if (e_txt.dim() != e_img.dim()) {
        throw std::invalid_argument("fuse_embeddings: dimension mismatch");
    }
    Embedding out(e_txt.dim());
    for (int i = 0; i < e_txt.dim(); ++i) {
        out.v[i] = (1.0 - lambda_t) * e_txt.v[i] + lambda_t * e_img.v[i];
    }
    return out;
}

GuidanceSchedule GuidanceSchedule::pingpong(int tau, int t0) {
    if (tau < 1) throw std::invalid_argument("pingpong: tau must be a positive integer");
    GuidanceSchedule s;
    s.mode = ScheduleMode::PingPong;
    s.tau = tau;
    s.t0 = t0;
    return s;
}

GuidanceSchedule GuidanceSchedule::constant(double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("constant: lambda must be in [0,1]");
    GuidanceSchedule s;
    s.mode = ScheduleMode::Constant;
    s.value = lambda;
    return s;
}

GuidanceSchedule GuidanceSchedule::ramp(double sigma_max) {
    if (!(sigma_max > 0.0)) throw std::invalid_argument("ramp: sigma_max must be > 0");
    GuidanceSchedule s;
    s.mode = ScheduleMode::Ramp;
    s.sigma_max = sigma_max;
    return s;
}

std::string GuidanceSchedule::describe() const {
    switch (mode) {
        case ScheduleMode::PingPong:
            return "pingpong(tau=" + std::to_string(tau) + (t0 ? ",t0=" + std::to_string(t0) : "") + ")";
        case ScheduleMode::Constant: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "constant(%g)", value);
            return buf;
        }
        case ScheduleMode::Ramp: return "ramp";
    }
    return "?";
}

double lambda_at(const GuidanceSchedule& sched, int t, double sigma_t) {
    switch (sched.mode) {
        case ScheduleMode::PingPong: {
            const long long phase = static_cast<long long>(
                std::floor(static_cast<double>(t - sched.t0) / sched.tau));
            return ((phase % 2) + 2) % 2 == 0 ? 0.0 : 1.0;
        }
        case ScheduleMode::Constant:
            return sched.value;
        case ScheduleMode::Ramp:
            return std::clamp(sigma_t / sched.sigma_max, 0.0, 1.0);
    }
    throw std::logic_error("lambda_at: bad schedule mode");
}

}  // namespace glyphlab::guidance
