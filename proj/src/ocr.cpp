#include "glyphlab/ocr.hpp"

#include "glyphlab/font.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace glyphlab::evaluation {

namespace {

using corpus::font_charset;
using corpus::glyph_bit;
using corpus::kGlyphHeight;
using corpus::kGlyphWidth;

struct GlyphHit {
    int gi;
    int x, y;      // top-left pixel
    int scale;
    double score;  // signed Pearson r
};

// (H+1)x(W+1) summed-area table.
struct Integral {
    int w = 0, h = 0;
    std::vector<double> s;

    explicit Integral(const std::vector<double>& luma, int width, int height, bool squared) : w(width), h(height) {
        s.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
        for (int y = 0; y < h; ++y) {
            double row = 0.0;
            for (int x = 0; x < w; ++x) {
                double v = luma[static_cast<std::size_t>(y) * w + x];
                if (squared) v *= v;
                row += v;
                s[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                    s[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row;
            }
        }
    }

    double rect(int x, int y, int rw, int rh) const {
        const std::size_t stride = static_cast<std::size_t>(w + 1);
        return s[(y + rh) * stride + (x + rw)] - s[y * stride + (x + rw)] - s[(y + rh) * stride + x] +
               s[static_cast<std::size_t>(y) * stride + x];
    }
};

double glyph_box_iou(const GlyphHit& a, const GlyphHit& b) {
    const int ax1 = a.x + kGlyphWidth * a.scale, ay1 = a.y + kGlyphHeight * a.scale;
    const int bx1 = b.x + kGlyphWidth * b.scale, by1 = b.y + kGlyphHeight * b.scale;
    const int ix = std::max(0, std::min(ax1, bx1) - std::max(a.x, b.x));
    const int iy = std::max(0, std::min(ay1, by1) - std::max(a.y, b.y));
    const double inter = static_cast<double>(ix) * iy;
    const double area_a = static_cast<double>(kGlyphWidth * a.scale) * (kGlyphHeight * a.scale);
    const double area_b = static_cast<double>(kGlyphWidth * b.scale) * (kGlyphHeight * b.scale);
    return inter / (area_a + area_b - inter);
}

}  // namespace

std::vector<DetectedWord> ocr_oracle(const Image& image, const OcrConfig& cfg) {
    const int W = image.width, H = image.height;
    const std::vector<double> luma = to_luma(image);
    const Integral i1(luma, W, H, false);
    const Integral i2(luma, W, H, true);
    const std::string& charset = font_charset();
    const int n_glyphs = static_cast<int>(charset.size());

    // Per-glyph count of ON cells in the 5x7 grid.
    std::vector<int> on_cells(n_glyphs, 0);
    for (int g = 0; g < n_glyphs; ++g) {
        for (int r = 0; r < kGlyphHeight; ++r)
            for (int c = 0; c < kGlyphWidth; ++c) on_cells[g] += glyph_bit(g, r, c) ? 1 : 0;
    }

    std::vector<GlyphHit> hits;
    for (int scale : cfg.scales) {
        const int tw = kGlyphWidth * scale, th = kGlyphHeight * scale;
        if (tw > W || th > H) continue;
        const double n = static_cast<double>(tw) * th;
        const int cells = kGlyphWidth * kGlyphHeight;
        for (int y = 0; y + th <= H; ++y) {
            for (int x = 0; x + tw <= W; ++x) {
                const double s1 = i1.rect(x, y, tw, th);
                const double s2 = i2.rect(x, y, tw, th);
                const double den_w = s2 - s1 * s1 / n;
                const double std_w = std::sqrt(std::max(0.0, den_w) / n);
                if (std_w < cfg.min_contrast) continue;
                for (int g = 0; g < n_glyphs; ++g) {
                    const int k_on = on_cells[g];
                    // Window sum over the template's ON cells, one SAT
                    // query per s x s cell.
                    double sum_on = 0.0;
                    for (int r = 0; r < kGlyphHeight; ++r) {
                        for (int c = 0; c < kGlyphWidth; ++c) {
                            if (glyph_bit(g, r, c)) sum_on += i1.rect(x + c * scale, y + r * scale, scale, scale);
                        }
                    }
                    const double mean_t = static_cast<double>(k_on) / cells;
                    const double num = sum_on - s1 * mean_t;
                    const double den_t = k_on * scale * scale * (1.0 - mean_t);
                    const double r = num / std::sqrt(den_w * den_t);
                    if (std::abs(r) >= cfg.ncc_threshold) hits.push_back({g, x, y, scale, r});
                }
            }
        }
    }

    // Non-max suppression by |score|. Scores are bucketed so that a true
    // large glyph at 0.999 (slightly degraded by background structure)
    // outranks a spurious exact sub-pattern of itself at a smaller scale.
    auto bucket = [](const GlyphHit& h) { return std::lround(std::abs(h.score) * 200.0); };
    std::sort(hits.begin(), hits.end(), [&](const GlyphHit& a, const GlyphHit& b) {
        const long ba = bucket(a), bb = bucket(b);
        if (ba != bb) return ba > bb;
        if (a.scale != b.scale) return a.scale > b.scale;
        const double sa = std::abs(a.score), sb = std::abs(b.score);
        if (sa != sb) return sa > sb;
        return std::tie(a.y, a.x, a.gi) < std::tie(b.y, b.x, b.gi);
    });
    std::vector<GlyphHit> kept;
    for (const GlyphHit& h : hits) {
        bool suppressed = false;
        for (const GlyphHit& k : kept) {
            if (glyph_box_iou(h, k) > 0.3) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(h);
    }

    // Group into words: same scale and polarity, near-equal baselines,
    // origin spacing close to the 6*scale advance.
    std::sort(kept.begin(), kept.end(), [](const GlyphHit& a, const GlyphHit& b) {
        return std::tie(a.y, a.x) < std::tie(b.y, b.x);
    });
    struct WordHit {
        DetectedWord word;
        double mean_score = 0.0;
        double area = 0.0;
    };
    std::vector<char> used(kept.size(), 0);
    std::vector<WordHit> words;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (used[i]) continue;
        std::vector<const GlyphHit*> chain = {&kept[i]};
        used[i] = 1;
        bool extended = true;
        while (extended) {
            extended = false;
            const GlyphHit* tail = chain.back();
            int best = -1;
            int best_dx = 0;
            for (std::size_t j = 0; j < kept.size(); ++j) {
                if (used[j]) continue;
                const GlyphHit& c = kept[j];
                if (c.scale != tail->scale) continue;
                if ((c.score > 0) != (tail->score > 0)) continue;
                if (std::abs(c.y - tail->y) > std::max(2, tail->scale)) continue;
                const int dx = c.x - tail->x;
                if (dx < 4 * tail->scale || dx > 9 * tail->scale) continue;
                if (best < 0 || dx < best_dx) {
                    best = static_cast<int>(j);
                    best_dx = dx;
                }
            }
            if (best >= 0) {
                used[best] = 1;
                chain.push_back(&kept[best]);
                extended = true;
            }
        }
        if (static_cast<int>(chain.size()) < cfg.min_word_len) continue;
        std::string text;
        int x0 = chain.front()->x, y0 = chain.front()->y;
        int x1 = 0, y1 = 0;
        double score = 0.0;
        for (const GlyphHit* g : chain) {
            text += charset[g->gi];
            x0 = std::min(x0, g->x);
            y0 = std::min(y0, g->y);
            x1 = std::max(x1, g->x + kGlyphWidth * g->scale);
            y1 = std::max(y1, g->y + kGlyphHeight * g->scale);
            score += std::abs(g->score);
        }
        WordHit wh;
        wh.word = {text, guidance::NormalizedBox{static_cast<double>(x0) / W, static_cast<double>(y0) / H,
                                                 static_cast<double>(x1) / W, static_cast<double>(y1) / H}};
        wh.mean_score = score / static_cast<double>(chain.size());
        wh.area = static_cast<double>(x1 - x0) * (y1 - y0);
        words.push_back(std::move(wh));
    }

    // Word-level suppression: parasitic low-score chains assembled from
    // sub-patterns of real glyphs overlap the true word's box; keep the
    // stronger word when boxes overlap substantially.
    std::stable_sort(words.begin(), words.end(),
                     [](const WordHit& a, const WordHit& b) { return a.mean_score > b.mean_score; });
    std::vector<DetectedWord> out;
    std::vector<const WordHit*> accepted;
    for (const WordHit& w : words) {
        bool suppressed = false;
        for (const WordHit* k : accepted) {
            const double ix = std::max(0.0, std::min(w.word.box.x1, k->word.box.x1) * W -
                                                std::max(w.word.box.x0, k->word.box.x0) * W);
            const double iy = std::max(0.0, std::min(w.word.box.y1, k->word.box.y1) * H -
                                                std::max(w.word.box.y0, k->word.box.y0) * H);
            const double inter = ix * iy;
            if (inter / std::min(w.area, k->area) > 0.3) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) accepted.push_back(&w);
    }
    // Restore reading order.
    std::sort(accepted.begin(), accepted.end(), [](const WordHit* a, const WordHit* b) {
        return std::tie(a->word.box.y0, a->word.box.x0) < std::tie(b->word.box.y0, b->word.box.x0);
    });
    for (const WordHit* w : accepted) out.push_back(w->word);
    return out;
}

}  // namespace glyphlab::evaluation
