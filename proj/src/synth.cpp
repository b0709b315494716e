#include "glyphlab/synth.hpp"

#include "glyphlab/font.hpp"
#include "glyphlab/wordlist.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace glyphlab::corpus {

namespace {

constexpr int kMaxPlacementTries = 12;

struct PixelBox {
    int x0, y0, x1, y1;  // half-open

    bool overlaps(const PixelBox& o, int pad) const {
        return x0 - pad < o.x1 && o.x0 - pad < x1 && y0 - pad < o.y1 && o.y0 - pad < y1;
    }
};

int grid_index_of(double v) {
    const double scaled = v * 3.0;
    if (scaled <= 1.0) return 0;
    if (scaled <= 2.0) return 1;
    return 2;
}

// All integer x0 such that the word box fits the canvas with a 1 px margin
// and its center falls in grid column `col`.
std::vector<int> feasible_origins(int canvas, int extent, int cell_index) {
    std::vector<int> xs;
    for (int x0 = 1; x0 + extent < canvas; ++x0) {
        const double center = (x0 + extent / 2.0) / canvas;
        if (grid_index_of(center) == cell_index) xs.push_back(x0);
    }
    return xs;
}

void draw_glyph(Image& img, int gi, int x0, int y0, int scale, const std::array<double, 3>& color,
                int clip_x0, int clip_y0, int clip_x1, int clip_y1) {
    for (int r = 0; r < kGlyphHeight; ++r) {
        for (int c = 0; c < kGlyphWidth; ++c) {
            if (!glyph_bit(gi, r, c)) continue;
            for (int dy = 0; dy < scale; ++dy) {
                for (int dx = 0; dx < scale; ++dx) {
                    const int x = x0 + c * scale + dx;
                    const int y = y0 + r * scale + dy;
                    if (x < clip_x0 || x >= clip_x1 || y < clip_y0 || y >= clip_y1) continue;
                    for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = color[ch];
                }
            }
        }
    }
}

void render_background(Image& img, const BackgroundSpec& bg, Rng& rng) {
    const int w = img.width, h = img.height;
    switch (bg.kind) {
        case BackgroundSpec::Kind::Flat:
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = bg.color_a[c];
            break;
        case BackgroundSpec::Kind::GradientH:
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double t = w > 1 ? static_cast<double>(x) / (w - 1) : 0.0;
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = (1 - t) * bg.color_a[c] + t * bg.color_b[c];
                }
            break;
        case BackgroundSpec::Kind::GradientV:
            for (int y = 0; y < h; ++y) {
                const double t = h > 1 ? static_cast<double>(y) / (h - 1) : 0.0;
                for (int x = 0; x < w; ++x)
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = (1 - t) * bg.color_a[c] + t * bg.color_b[c];
            }
            break;
        case BackgroundSpec::Kind::Textured: {
            // Smooth low-amplitude noise: coarse grid upsampled bicubically.
            const int g = 8;
            Image coarse(g, g);
            for (int y = 0; y < g; ++y)
                for (int x = 0; x < g; ++x) {
                    const double n = rng.uniform(-0.04, 0.04);
                    for (int c = 0; c < 3; ++c) coarse.at(x, y, c) = std::clamp(bg.color_a[c] + n, 0.0, 1.0);
                }
            img = resize_bicubic(coarse, w, h);
            break;
        }
    }
    // Decorative shapes stay low-contrast so they never mimic glyph strokes.
    for (int s = 0; s < bg.num_shapes; ++s) {
        const double delta = rng.uniform(-0.08, 0.08);
        const bool disc = rng.bernoulli(0.5);
        const int cx = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(w)));
        const int cy = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(h)));
        const int r = 4 + static_cast<int>(rng.uniform_int(12));
        for (int y = std::max(0, cy - r); y < std::min(h, cy + r); ++y) {
            for (int x = std::max(0, cx - r); x < std::min(w, cx + r); ++x) {
                if (disc && (x - cx) * (x - cx) + (y - cy) * (y - cy) > r * r) continue;
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = std::clamp(img.at(x, y, c) + delta, 0.0, 1.0);
            }
        }
    }
}

}  // namespace

RenderResult render_scene(const SceneSpec& spec) {
    if (spec.words.empty() || spec.words.size() > 3) {
        throw std::invalid_argument("render_scene: spec must place 1..3 words");
    }
    const int canvas = spec.canvas;
    Rng rng(spec.rng_seed);
    RenderResult out;
    out.image = Image(canvas, canvas);
    render_background(out.image, spec.background, rng);

    std::vector<PixelBox> placed;
    for (const WordPlacement& wp : spec.words) {
        for (char c : wp.text) {
            if (glyph_index(c) < 0) throw std::invalid_argument("render_scene: unsupported character in word " + wp.text);
        }
        const int w = word_pixel_width(static_cast<int>(wp.text.size()), wp.scale);
        const int h = word_pixel_height(wp.scale);
        const int col = wp.grid_cell % 3;
        const int row = wp.grid_cell / 3;
        const std::vector<int> xs = feasible_origins(canvas, w, col);
        const std::vector<int> ys = feasible_origins(canvas, h, row);
        if (xs.empty() || ys.empty()) {
            throw LayoutError("render_scene: word '" + wp.text + "' cannot center in grid cell " +
                              std::to_string(wp.grid_cell));
        }
        bool ok = false;
        PixelBox box{};
        for (int attempt = 0; attempt < kMaxPlacementTries && !ok; ++attempt) {
            const int x0 = xs[rng.uniform_int(xs.size())];
            const int y0 = ys[rng.uniform_int(ys.size())];
            box = PixelBox{x0, y0, x0 + w, y0 + h};
            ok = true;
            for (const PixelBox& pb : placed) {
                if (box.overlaps(pb, 2)) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) throw LayoutError("render_scene: could not place word '" + wp.text + "' without overlap");
        placed.push_back(box);

        for (std::size_t k = 0; k < wp.text.size(); ++k) {
            draw_glyph(out.image, glyph_index(wp.text[k]), box.x0 + static_cast<int>(k) * glyph_advance(wp.scale),
                       box.y0, wp.scale, wp.color, 0, 0, canvas, canvas);
        }
        out.annotations.push_back(
            {wp.text, guidance::NormalizedBox{static_cast<double>(box.x0) / canvas, static_cast<double>(box.y0) / canvas,
                                              static_cast<double>(box.x1) / canvas, static_cast<double>(box.y1) / canvas}});
    }
    quantize8(out.image);
    return out;
}

std::string scene_caption(const SceneSpec& spec) {
    const auto& c = spec.background.color_a;
    const double luma = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
    std::string tone = luma < 0.34 ? "dark" : luma < 0.62 ? "muted" : "light";
    std::string kind;
    switch (spec.background.kind) {
        case BackgroundSpec::Kind::Flat: kind = "plain"; break;
        case BackgroundSpec::Kind::GradientH:
        case BackgroundSpec::Kind::GradientV: kind = "shaded"; break;
        case BackgroundSpec::Kind::Textured: kind = "textured"; break;
    }
    std::string caption = "a sign with printed text on a " + tone + " " + kind + " background";
    if (spec.background.num_shapes > 0) caption += " with decorative shapes";
    return caption;
}

namespace {

struct GlyphPlan {
    int gi;       // glyph to draw
    int dx, dy;   // jitter offset
};

}  // namespace

Image corrupt_glyphs(const Image& image, const std::vector<Annotation>& annotations, Rng& rng) {
    if (annotations.empty()) throw std::invalid_argument("corrupt_glyphs: annotations must be non-empty");
    Image out = image;
    const int canvas_w = image.width, canvas_h = image.height;
    const std::string& charset = font_charset();

    for (const Annotation& ann : annotations) {
        const int x0 = static_cast<int>(std::lround(ann.box.x0 * canvas_w));
        const int y0 = static_cast<int>(std::lround(ann.box.y0 * canvas_h));
        const int x1 = static_cast<int>(std::lround(ann.box.x1 * canvas_w));
        const int y1 = static_cast<int>(std::lround(ann.box.y1 * canvas_h));
        const int scale = static_cast<int>(std::lround(static_cast<double>(y1 - y0) / kGlyphHeight));
        if (scale < 1) throw std::invalid_argument("corrupt_glyphs: annotation box too small");

        // Recover the word's ink color and a background fill estimate from
        // the clean rendering (annotations describe the pos-HQ layout).
        std::array<double, 3> ink{0, 0, 0};
        std::array<double, 3> paper{0, 0, 0};
        std::size_t n_ink = 0, n_paper = 0;
        for (std::size_t k = 0; k < ann.text.size(); ++k) {
            const int gi = glyph_index(ann.text[k]);
            const int gx = x0 + static_cast<int>(k) * glyph_advance(scale);
            for (int r = 0; r < kGlyphHeight; ++r) {
                for (int c = 0; c < kGlyphWidth; ++c) {
                    const int px = gx + c * scale, py = y0 + r * scale;
                    if (px < 0 || px >= canvas_w || py < 0 || py >= canvas_h) continue;
                    if (glyph_bit(gi, r, c)) {
                        for (int ch = 0; ch < 3; ++ch) ink[ch] += image.at(px, py, ch);
                        ++n_ink;
                    } else {
                        for (int ch = 0; ch < 3; ++ch) paper[ch] += image.at(px, py, ch);
                        ++n_paper;
                    }
                }
            }
        }
        for (int ch = 0; ch < 3; ++ch) {
            ink[ch] = n_ink ? ink[ch] / n_ink : 0.0;
            paper[ch] = n_paper ? paper[ch] / n_paper : 1.0;
        }

        // Plan substitutions and jitter, then erase and redraw.
        std::vector<GlyphPlan> plan(ann.text.size());
        for (std::size_t k = 0; k < ann.text.size(); ++k) {
            int gi = glyph_index(ann.text[k]);
            if (rng.bernoulli(0.3)) {
                int sub;
                do {
                    sub = static_cast<int>(rng.uniform_int(charset.size()));
                } while (sub == gi);
                gi = sub;
            }
            plan[k] = {gi, static_cast<int>(rng.uniform_int(-2, 2)), static_cast<int>(rng.uniform_int(-2, 2))};
        }
        for (std::size_t k = 0; k < ann.text.size(); ++k) {
            const int gi = glyph_index(ann.text[k]);
            const int gx = x0 + static_cast<int>(k) * glyph_advance(scale);
            std::array<double, 3> fill = paper;
            draw_glyph(out, gi, gx, y0, scale, fill, x0, y0, x1, y1);
        }
        for (std::size_t k = 0; k < ann.text.size(); ++k) {
            const int gx = x0 + static_cast<int>(k) * glyph_advance(scale) + plan[k].dx;
            draw_glyph(out, plan[k].gi, gx, y0 + plan[k].dy, scale, ink, x0, y0, x1, y1);
        }

        // Local elastic warp, sampled and written strictly inside the box.
        const double amp = rng.uniform(1.0, 2.0);
        const double period = rng.uniform(6.0, 12.0);
        const double phase_x = rng.uniform(0.0, 2.0 * M_PI);
        const double phase_y = rng.uniform(0.0, 2.0 * M_PI);
        Image region(x1 - x0, y1 - y0);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
                for (int ch = 0; ch < 3; ++ch) region.at(x - x0, y - y0, ch) = out.at(x, y, ch);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double sx = std::clamp(x - x0 + amp * std::sin(2.0 * M_PI * (y - y0) / period + phase_x), 0.0,
                                             static_cast<double>(region.width - 1));
                const double sy = std::clamp(y - y0 + amp * std::sin(2.0 * M_PI * (x - x0) / period + phase_y), 0.0,
                                             static_cast<double>(region.height - 1));
                const int ix = static_cast<int>(sx), iy = static_cast<int>(sy);
                const int ix1 = std::min(ix + 1, region.width - 1), iy1 = std::min(iy + 1, region.height - 1);
                const double fx = sx - ix, fy = sy - iy;
                for (int ch = 0; ch < 3; ++ch) {
                    const double v = (1 - fx) * (1 - fy) * region.at(ix, iy, ch) + fx * (1 - fy) * region.at(ix1, iy, ch) +
                                     (1 - fx) * fy * region.at(ix, iy1, ch) + fx * fy * region.at(ix1, iy1, ch);
                    out.at(x, y, ch) = v;
                }
            }
        }
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
                for (int ch = 0; ch < 3; ++ch)
                    out.at(x, y, ch) = std::round(std::clamp(out.at(x, y, ch), 0.0, 1.0) * 255.0) / 255.0;
    }
    return out;
}

void DegradationConfig::validate() const {
    if (!(blur_sigma_min >= 0.0 && blur_sigma_min <= blur_sigma_max)) {
        throw std::invalid_argument("DegradationConfig: bad blur sigma range");
    }
    if (!(noise_std >= 0.0 && noise_std < 0.5)) {
        throw std::invalid_argument("DegradationConfig: noise_std must be in [0, 0.5)");
    }
    if (downsample_factor != 1 && downsample_factor != 4 && downsample_factor != 8) {
        throw std::invalid_argument("DegradationConfig: downsample_factor must be 1, 4 or 8");
    }
}

namespace {

// Very light JPEG-style degradation: 8x8 DCT per channel with a uniform
// quantization step, optional via DegradationConfig.
void jpeg_like(Image& img) {
    const int B = 8;
    std::vector<double> block(B * B), coef(B * B);
    for (int c = 0; c < 3; ++c) {
        for (int by = 0; by + B <= img.height; by += B) {
            for (int bx = 0; bx + B <= img.width; bx += B) {
                for (int y = 0; y < B; ++y)
                    for (int x = 0; x < B; ++x) block[y * B + x] = img.at(bx + x, by + y, c);
                for (int v = 0; v < B; ++v)
                    for (int u = 0; u < B; ++u) {
                        double s = 0;
                        for (int y = 0; y < B; ++y)
                            for (int x = 0; x < B; ++x)
                                s += block[y * B + x] * std::cos((2 * x + 1) * u * M_PI / (2 * B)) *
                                     std::cos((2 * y + 1) * v * M_PI / (2 * B));
                        const double cu = u == 0 ? std::sqrt(1.0 / B) : std::sqrt(2.0 / B);
                        const double cv = v == 0 ? std::sqrt(1.0 / B) : std::sqrt(2.0 / B);
                        const double q = 0.02 * (1 + u + v);
                        coef[v * B + u] = std::round(cu * cv * s / q) * q;
                    }
                for (int y = 0; y < B; ++y)
                    for (int x = 0; x < B; ++x) {
                        double s = 0;
                        for (int v = 0; v < B; ++v)
                            for (int u = 0; u < B; ++u) {
                                const double cu = u == 0 ? std::sqrt(1.0 / B) : std::sqrt(2.0 / B);
                                const double cv = v == 0 ? std::sqrt(1.0 / B) : std::sqrt(2.0 / B);
                                s += cu * cv * coef[v * B + u] * std::cos((2 * x + 1) * u * M_PI / (2 * B)) *
                                     std::cos((2 * y + 1) * v * M_PI / (2 * B));
                            }
                        img.at(bx + x, by + y, c) = s;
                    }
            }
        }
    }
}

}  // namespace

Image degrade_image(const Image& image, const DegradationConfig& cfg, Rng& rng) {
    cfg.validate();
    const double sigma = cfg.blur_sigma_max > cfg.blur_sigma_min
                             ? rng.uniform(cfg.blur_sigma_min, cfg.blur_sigma_max)
                             : cfg.blur_sigma_min;
    Image out = gaussian_blur(image, sigma);
    if (cfg.downsample_factor > 1) {
        out = downsample_box(out, cfg.downsample_factor);
        out = resize_bicubic(out, image.width, image.height);
    }
    if (cfg.jpeg_like_quantization) jpeg_like(out);
    add_gaussian_noise(out, cfg.noise_std, rng);
    clamp01(out);
    quantize8(out);
    return out;
}

Image make_lr_image(const Image& hr, const DegradationConfig& cfg, Rng& rng) {
    cfg.validate();
    const double sigma = cfg.blur_sigma_max > cfg.blur_sigma_min
                             ? rng.uniform(cfg.blur_sigma_min, cfg.blur_sigma_max)
                             : cfg.blur_sigma_min;
    Image out = gaussian_blur(hr, sigma);
    out = downsample_box(out, cfg.downsample_factor);
    add_gaussian_noise(out, cfg.noise_std, rng);
    clamp01(out);
    quantize8(out);
    return out;
}

std::array<CorpusSample, 4> synthesize_quadrants(const SceneSpec& spec, const DegradationConfig& cfg,
                                                 const std::string& sample_id) {
    const RenderResult clean = render_scene(spec);
    Rng rng_corrupt(mix_seed(spec.rng_seed, "corrupt"));
    const Image corrupted = corrupt_glyphs(clean.image, clean.annotations, rng_corrupt);

    Rng rng_deg_pos(mix_seed(spec.rng_seed, "degrade-pos"));
    Rng rng_deg_neg(mix_seed(spec.rng_seed, "degrade-neg"));
    const Image degraded_pos = degrade_image(clean.image, cfg, rng_deg_pos);
    const Image degraded_neg = degrade_image(corrupted, cfg, rng_deg_neg);

    const std::string caption = scene_caption(spec);
    std::vector<std::pair<std::string, guidance::NormalizedBox>> cue_boxes;
    for (const Annotation& a : clean.annotations) cue_boxes.emplace_back(a.text, a.box);

    const std::array<guidance::Quadrant, 4> quadrants = {guidance::Quadrant::PosHQ, guidance::Quadrant::NegHQ,
                                                         guidance::Quadrant::PosLQ, guidance::Quadrant::NegLQ};
    const std::array<const Image*, 4> hr = {&clean.image, &corrupted, &degraded_pos, &degraded_neg};

    std::array<CorpusSample, 4> out;
    for (int q = 0; q < 4; ++q) {
        CorpusSample& s = out[q];
        s.sample_id = sample_id;
        s.quadrant = quadrants[q];
        s.hr_image = *hr[q];
        Rng rng_lr(mix_seed(spec.rng_seed, std::string("lr-") + guidance::quadrant_name(quadrants[q])));
        s.lr_image = make_lr_image(s.hr_image, cfg, rng_lr);
        s.scale_factor = cfg.downsample_factor;
        s.annotations = clean.annotations;
        s.bundle = guidance::build_prompt_bundle(caption, cue_boxes, guidance::guide_prompt_for(quadrants[q]));
        s.bundle.quadrant = quadrants[q];
    }
    return out;
}

void CorpusGenConfig::validate() const {
    if (num_scenes < 1) throw std::invalid_argument("CorpusGenConfig: num_scenes must be >= 1");
    if (!(min_words >= 1 && min_words <= max_words && max_words <= 3)) {
        throw std::invalid_argument("CorpusGenConfig: need 1 <= min_words <= max_words <= 3");
    }
    degradation.validate();
}

namespace {

// Word lengths that can center a box in the given grid column at a scale.
std::vector<int> feasible_lengths(int canvas, int col, int scale) {
    std::vector<int> lens;
    for (int len = 3; len <= 8; ++len) {
        if (!feasible_origins(canvas, word_pixel_width(len, scale), col).empty()) lens.push_back(len);
    }
    return lens;
}

}  // namespace

SceneSpec sample_scene_spec(const CorpusGenConfig& cfg, std::uint64_t scene_seed) {
    cfg.validate();
    for (int attempt = 0;; ++attempt) {
        const std::uint64_t seed = mix_seed(scene_seed, static_cast<std::uint64_t>(attempt));
        Rng rng(mix_seed(seed, "spec"));
        SceneSpec spec;
        spec.rng_seed = mix_seed(seed, "render");

        BackgroundSpec& bg = spec.background;
        const int kind = static_cast<int>(rng.uniform_int(4));
        bg.kind = static_cast<BackgroundSpec::Kind>(kind);
        const bool dark = rng.bernoulli(0.5);
        for (int c = 0; c < 3; ++c) {
            bg.color_a[c] = dark ? rng.uniform(0.08, 0.32) : rng.uniform(0.68, 0.92);
            bg.color_b[c] = std::clamp(bg.color_a[c] + rng.uniform(-0.15, 0.15), 0.0, 1.0);
        }
        bg.num_shapes = static_cast<int>(rng.uniform_int(3));

        const int n_words = cfg.min_words + static_cast<int>(rng.uniform_int(
                                                static_cast<std::uint64_t>(cfg.max_words - cfg.min_words + 1)));
        std::vector<int> cells = {0, 1, 2, 3, 4, 5, 6, 7, 8};
        for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.uniform_int(i)]);

        const auto& words = word_list();
        bool ok = true;
        for (int k = 0; k < n_words && ok; ++k) {
            WordPlacement wp;
            wp.grid_cell = cells[k];
            const int col = wp.grid_cell % 3;
            // Prefer the larger font when the column allows it.
            std::vector<std::pair<int, std::vector<int>>> options;
            for (int scale : {3, 2}) {
                auto lens = feasible_lengths(spec.canvas, col, scale);
                if (!lens.empty()) options.emplace_back(scale, std::move(lens));
            }
            if (options.empty()) {
                ok = false;
                break;
            }
            const auto& choice = options[rng.uniform_int(options.size())];
            wp.scale = choice.first;
            const auto& lens = choice.second;
            const int want_len = lens[rng.uniform_int(lens.size())];
            std::vector<const std::string*> pool;
            for (const auto& w : words) {
                if (static_cast<int>(w.size()) == want_len) pool.push_back(&w);
            }
            if (pool.empty()) {
                ok = false;
                break;
            }
            wp.text = *pool[rng.uniform_int(pool.size())];
            for (int c = 0; c < 3; ++c) wp.color[c] = dark ? rng.uniform(0.86, 1.0) : rng.uniform(0.0, 0.14);
            spec.words.push_back(wp);
        }
        if (!ok) continue;
        try {
            render_scene(spec);  // placement dry run
            return spec;
        } catch (const LayoutError&) {
            continue;  // resample with a derived seed
        }
    }
}

}  // namespace glyphlab::corpus
