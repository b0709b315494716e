#include "glyphlab/font.hpp"
#include "glyphlab/guidance.hpp"
#include "glyphlab/metrics.hpp"
#include "glyphlab/synth.hpp"
#include "glyphlab/wordlist.hpp"

#include <doctest.h>

#include <set>

using namespace glyphlab;
using namespace glyphlab::corpus;

namespace {

SceneSpec simple_spec(std::uint64_t seed, const std::string& word = "HSBC", int cell = 4, int scale = 2) {
    SceneSpec spec;
    spec.background.kind = BackgroundSpec::Kind::Flat;
    spec.background.color_a = {0.85, 0.85, 0.8};
    spec.words.push_back({word, cell, scale, {0.05, 0.05, 0.1}});
    spec.rng_seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("font: 36 pairwise distinct glyphs") {
    const std::string& cs = font_charset();
    REQUIRE(cs.size() == 36);
    std::set<std::string> patterns;
    for (char c : cs) {
        std::string pat;
        const int gi = glyph_index(c);
        REQUIRE(gi >= 0);
        for (int r = 0; r < kGlyphHeight; ++r)
            for (int col = 0; col < kGlyphWidth; ++col) pat += glyph_bit(gi, r, col) ? '#' : '.';
        patterns.insert(pat);
    }
    CHECK(patterns.size() == 36);
    CHECK(glyph_index('?') == -1);
}

TEST_CASE("word list: 1000 uppercase words of length 3-8") {
    const auto& words = word_list();
    REQUIRE(words.size() == 1000);
    std::set<std::string> unique(words.begin(), words.end());
    CHECK(unique.size() == 1000);
    for (const auto& w : words) {
        CHECK(w.size() >= 3);
        CHECK(w.size() <= 8);
        for (char c : w) CHECK((c >= 'A' && c <= 'Z'));
    }
}

TEST_CASE("render_scene: determinism and annotation placement") {
    const SceneSpec spec = simple_spec(99);
    const RenderResult a = render_scene(spec);
    const RenderResult b = render_scene(spec);
    REQUIRE(a.annotations.size() == 1);
    CHECK(a.annotations[0].text == "HSBC");
    for (std::size_t i = 0; i < a.image.pixels.size(); ++i) CHECK(a.image.pixels[i] == b.image.pixels[i]);
    // The word's box center maps back to the intended grid phrase.
    CHECK(guidance::verbalize_position(a.annotations[0].box) == "center");
}

TEST_CASE("render_scene rejects empty and unsupported words") {
    SceneSpec empty;
    empty.rng_seed = 1;
    CHECK_THROWS(render_scene(empty));
    SceneSpec bad = simple_spec(1, "HS?C");
    CHECK_THROWS_AS(render_scene(bad), std::invalid_argument);
}

TEST_CASE("corrupt_glyphs: locality is exact outside the boxes") {
    const SceneSpec spec = simple_spec(7);
    const RenderResult r = render_scene(spec);
    Rng rng(5);
    const Image corrupted = corrupt_glyphs(r.image, r.annotations, rng);
    REQUIRE(corrupted.same_shape(r.image));

    const auto& box = r.annotations[0].box;
    const int x0 = static_cast<int>(std::lround(box.x0 * 64)), x1 = static_cast<int>(std::lround(box.x1 * 64));
    const int y0 = static_cast<int>(std::lround(box.y0 * 64)), y1 = static_cast<int>(std::lround(box.y1 * 64));
    bool changed_inside = false;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool inside = x >= x0 && x < x1 && y >= y0 && y < y1;
            for (int c = 0; c < 3; ++c) {
                if (inside) {
                    if (corrupted.at(x, y, c) != r.image.at(x, y, c)) changed_inside = true;
                } else {
                    CHECK(corrupted.at(x, y, c) == r.image.at(x, y, c));
                }
            }
        }
    }
    CHECK(changed_inside);

    Rng rng2(5);
    CHECK_THROWS(corrupt_glyphs(r.image, {}, rng2));
}

TEST_CASE("degrade_image: identity limit and determinism") {
    const SceneSpec spec = simple_spec(3);
    const RenderResult r = render_scene(spec);
    DegradationConfig cfg;
    cfg.blur_sigma_min = cfg.blur_sigma_max = 0.0;
    cfg.noise_std = 0.0;
    cfg.downsample_factor = 1;
    Rng rng(1);
    const Image out = degrade_image(r.image, cfg, rng);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        CHECK(std::abs(out.pixels[i] - r.image.pixels[i]) < 1e-6);
    }

    DegradationConfig real_cfg;  // defaults: blur 1-2, noise 0.04, x4
    Rng ra(9), rb(9);
    const Image d1 = degrade_image(r.image, real_cfg, ra);
    const Image d2 = degrade_image(r.image, real_cfg, rb);
    for (std::size_t i = 0; i < d1.pixels.size(); ++i) CHECK(d1.pixels[i] == d2.pixels[i]);
}

TEST_CASE("degradation hurts PSNR more at x8 than x4") {
    double psnr4 = 0, psnr8 = 0;
    int n = 0;
    CorpusGenConfig gen;
    gen.num_scenes = 20;
    for (int i = 0; i < gen.num_scenes; ++i) {
        const SceneSpec spec = sample_scene_spec(gen, mix_seed(123, static_cast<std::uint64_t>(i)));
        const RenderResult r = render_scene(spec);
        DegradationConfig cfg;
        Rng r4(mix_seed(1, i)), r8(mix_seed(2, i));
        cfg.downsample_factor = 4;
        psnr4 += evaluation::psnr(degrade_image(r.image, cfg, r4), r.image);
        cfg.downsample_factor = 8;
        psnr8 += evaluation::psnr(degrade_image(r.image, cfg, r8), r.image);
        ++n;
    }
    CHECK(psnr8 / n < psnr4 / n);
    CHECK(psnr4 / n < 99.0);
}

TEST_CASE("synthesize_quadrants: four distinct images, shared cues, four tags") {
    CorpusGenConfig gen;
    const SceneSpec spec = sample_scene_spec(gen, 42);
    const auto quads = synthesize_quadrants(spec, gen.degradation, "s000042");

    std::set<std::string> tags;
    for (const auto& q : quads) tags.insert(guidance::quadrant_name(q.quadrant));
    CHECK(tags.size() == 4);

    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            bool differs = false;
            for (std::size_t k = 0; k < quads[i].hr_image.pixels.size() && !differs; ++k) {
                differs = quads[i].hr_image.pixels[k] != quads[j].hr_image.pixels[k];
            }
            CHECK(differs);
        }
    }

    // All four bundles carry identical text cues (from the pos-HQ render).
    for (int i = 1; i < 4; ++i) {
        REQUIRE(quads[i].bundle.text_cues.size() == quads[0].bundle.text_cues.size());
        for (std::size_t k = 0; k < quads[0].bundle.text_cues.size(); ++k) {
            CHECK(quads[i].bundle.text_cues[k].text == quads[0].bundle.text_cues[k].text);
            CHECK(quads[i].bundle.text_cues[k].pos == quads[0].bundle.text_cues[k].pos);
        }
        CHECK(quads[i].annotations.size() == quads[0].annotations.size());
    }

    // Quadrant guide prompts.
    CHECK(quads[0].bundle.guide_prompt == guidance::guide_prompt_pos_hq());
    CHECK(quads[1].bundle.guide_prompt == guidance::guide_prompt_neg_hq());
    CHECK(quads[2].bundle.guide_prompt == guidance::guide_prompt_pos_lq());
    CHECK(quads[3].bundle.guide_prompt == guidance::guide_prompt_neg_lq());

    // LR images have the right scale.
    for (const auto& q : quads) {
        CHECK(q.lr_image.width == 64 / gen.degradation.downsample_factor);
    }
}

TEST_CASE("sampled scene specs render without layout errors") {
    CorpusGenConfig gen;
    gen.min_words = 1;
    gen.max_words = 3;
    for (int i = 0; i < 30; ++i) {
        const SceneSpec spec = sample_scene_spec(gen, mix_seed(7, static_cast<std::uint64_t>(i)));
        const RenderResult r = render_scene(spec);
        CHECK(!r.annotations.empty());
        CHECK(r.annotations.size() == spec.words.size());
    }
}
