#pragma once

#include "glyphlab/image.hpp"
#include "glyphlab/metrics.hpp"

#include <vector>

namespace glyphlab::evaluation {

struct OcrConfig {
    std::vector<int> scales = {2, 3};  // font scales used by the corpus
    double ncc_threshold = 0.8;        // |Pearson r| acceptance threshold
    double min_contrast = 0.05;        // minimum window luma std (rejects flat patches)
    int min_word_len = 2;              // isolated single glyphs are dropped
};

// Template-matching recognizer over the embedded 5x7 font. Slides every
// glyph template at every configured scale, accepts matches with
// |normalized cross-correlation| >= threshold (negative r = dark-on-light
// text), non-max suppresses overlapping glyphs, and groups horizontally
// adjacent glyphs into words. Deterministic; returns an empty list when
// nothing is detected.
std::vector<DetectedWord> ocr_oracle(const Image& image, const OcrConfig& cfg = {});

}  // namespace glyphlab::evaluation
