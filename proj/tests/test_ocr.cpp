#include "glyphlab/metrics.hpp"
#include "glyphlab/ocr.hpp"
#include "glyphlab/synth.hpp"

#include <doctest.h>

using namespace glyphlab;
using namespace glyphlab::evaluation;

namespace {

std::vector<DetectedWord> gt_words(const std::vector<corpus::Annotation>& anns) {
    std::vector<DetectedWord> out;
    for (const auto& a : anns) out.push_back({a.text, a.box});
    return out;
}

}  // namespace

TEST_CASE("oracle is exact on clean renders") {
    corpus::CorpusGenConfig gen;
    gen.min_words = 1;
    gen.max_words = 3;
    for (int i = 0; i < 40; ++i) {
        const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, mix_seed(1001, static_cast<std::uint64_t>(i)));
        const corpus::RenderResult r = corpus::render_scene(spec);
        const auto pred = ocr_oracle(r.image);
        const auto m = word_f1(pred, gt_words(r.annotations));
        CHECK(m.f1 == 1.0);
    }
}

TEST_CASE("oracle edge cases") {
    Image blank(64, 64, 0.5);
    CHECK(ocr_oracle(blank).empty());

    // A correlation threshold above 1 can never be met.
    corpus::CorpusGenConfig gen;
    const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, 77);
    const corpus::RenderResult r = corpus::render_scene(spec);
    OcrConfig strict;
    strict.ncc_threshold = 1.01;
    CHECK(ocr_oracle(r.image, strict).empty());
}

TEST_CASE("oracle reads dark text on light backgrounds and vice versa") {
    for (bool dark_text : {true, false}) {
        corpus::SceneSpec spec;
        spec.background.kind = corpus::BackgroundSpec::Kind::Flat;
        spec.background.color_a = dark_text ? std::array<double, 3>{0.9, 0.9, 0.85} : std::array<double, 3>{0.1, 0.1, 0.15};
        spec.words.push_back({"BANK", 4, 2, dark_text ? std::array<double, 3>{0.05, 0.05, 0.05}
                                                      : std::array<double, 3>{0.95, 0.95, 0.95}});
        spec.rng_seed = dark_text ? 5 : 6;
        const corpus::RenderResult r = corpus::render_scene(spec);
        const auto pred = ocr_oracle(r.image);
        REQUIRE(pred.size() == 1);
        CHECK(pred[0].text == "BANK");
    }
}

TEST_CASE("glyph corruption lowers oracle F1 on most samples") {
    corpus::CorpusGenConfig gen;
    int below = 0, total = 0;
    for (int i = 0; i < 60; ++i) {
        const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, mix_seed(2002, static_cast<std::uint64_t>(i)));
        const corpus::RenderResult r = corpus::render_scene(spec);
        Rng rng(mix_seed(3003, static_cast<std::uint64_t>(i)));
        const Image corrupted = corpus::corrupt_glyphs(r.image, r.annotations, rng);
        const auto m = word_f1(ocr_oracle(corrupted), gt_words(r.annotations));
        if (m.f1 < 1.0) ++below;
        ++total;
    }
    // The acceptance bar is >= 90%; leave slack at this small sample size.
    CHECK(below >= total * 85 / 100);
}
