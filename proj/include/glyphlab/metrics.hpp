#pragma once

#include "glyphlab/guidance.hpp"
#include "glyphlab/image.hpp"

#include <string>
#include <vector>

namespace glyphlab::evaluation {

struct DetectedWord {
    std::string text;
    guidance::NormalizedBox box;
};

// Levenshtein distance with unit costs.
int edit_distance(const std::string& a, const std::string& b);

struct MatchResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // One-to-one (pred_index, gt_index) pairs.
    std::vector<std::pair<int, int>> pairs;
};

// Greedy highest-IoU one-to-one matching. A pair requires case-insensitive
// exact string equality and box IoU >= 0.5. Empty pred and gt both ->
// P = R = 1 (an image with no text, correctly left textless, is a success);
// one side empty -> 0.
MatchResult word_f1(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt);

// 1 - (edit distance over matched pairs + chars of unmatched gt words) /
// (total gt chars), clamped to [0,1]. Returns 1 when gt has no characters.
double char_accuracy(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt);

// Mean edit distance per gt word; unmatched gt words cost their full length,
// and unmatched predictions are ignored (they are charged via precision).
double mean_edit_distance(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt);

// 10*log10(1/MSE) for [0,1] images, capped at 99 dB when MSE < 1e-10.
double psnr(const Image& a, const Image& b);

// Standard SSIM with an 11x11 Gaussian window (sigma 1.5), c1 = 0.01^2,
// c2 = 0.03^2, averaged over channels.
double ssim(const Image& a, const Image& b);

// Mean squared 3x3 Laplacian response over interior pixels and channels.
double sharpness(const Image& a);

}  // namespace glyphlab::evaluation
