#include "glyphlab/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glyphlab::evaluation {

int edit_distance(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

namespace {

bool iequal(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

std::string upper(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

MatchResult word_f1(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt) {
    MatchResult r;
    if (pred.empty() && gt.empty()) {
        r.precision = r.recall = r.f1 = 1.0;
        return r;
    }
    struct Cand {
        double iou;
        int pi, gi;
    };
    std::vector<Cand> cands;
    for (int pi = 0; pi < static_cast<int>(pred.size()); ++pi) {
        for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi) {
            if (!iequal(pred[pi].text, gt[gi].text)) continue;
            const double iou = guidance::box_iou(pred[pi].box, gt[gi].box);
            if (iou >= 0.5) cands.push_back({iou, pi, gi});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.iou > b.iou; });
    std::vector<char> pred_used(pred.size(), 0), gt_used(gt.size(), 0);
    for (const Cand& c : cands) {
        if (pred_used[c.pi] || gt_used[c.gi]) continue;
        pred_used[c.pi] = gt_used[c.gi] = 1;
        r.pairs.emplace_back(c.pi, c.gi);
    }
    const double matches = static_cast<double>(r.pairs.size());
    r.precision = pred.empty() ? 0.0 : matches / static_cast<double>(pred.size());
    r.recall = gt.empty() ? 0.0 : matches / static_cast<double>(gt.size());
    r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

namespace {

// Localization-only pairing for the character metrics: words are matched
// greedily by IoU >= 0.5 with no string requirement, so a detection that
// reads "HSBD" over a ground-truth "HSBC" is charged one substitution
// rather than four missing characters.
std::vector<std::pair<int, int>> match_by_box(const std::vector<DetectedWord>& pred,
                                              const std::vector<DetectedWord>& gt) {
    struct Cand {
        double iou;
        int pi, gi;
    };
    std::vector<Cand> cands;
    for (int pi = 0; pi < static_cast<int>(pred.size()); ++pi) {
        for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi) {
            const double iou = guidance::box_iou(pred[pi].box, gt[gi].box);
            if (iou >= 0.5) cands.push_back({iou, pi, gi});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.iou > b.iou; });
    std::vector<char> pred_used(pred.size(), 0), gt_used(gt.size(), 0);
    std::vector<std::pair<int, int>> pairs;
    for (const Cand& c : cands) {
        if (pred_used[c.pi] || gt_used[c.gi]) continue;
        pred_used[c.pi] = gt_used[c.gi] = 1;
        pairs.emplace_back(c.pi, c.gi);
    }
    return pairs;
}

double char_error_total(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt) {
    std::vector<char> gt_matched(gt.size(), 0);
    double errors = 0.0;
    for (const auto& [pi, gi] : match_by_box(pred, gt)) {
        gt_matched[gi] = 1;
        errors += edit_distance(upper(pred[pi].text), upper(gt[gi].text));
    }
    for (std::size_t gi = 0; gi < gt.size(); ++gi) {
        if (!gt_matched[gi]) errors += static_cast<double>(gt[gi].text.size());
    }
    return errors;
}

}  // namespace

double char_accuracy(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt) {
    std::size_t total_chars = 0;
    for (const auto& w : gt) total_chars += w.text.size();
    if (total_chars == 0) return 1.0;
    return std::clamp(1.0 - char_error_total(pred, gt) / static_cast<double>(total_chars), 0.0, 1.0);
}

double mean_edit_distance(const std::vector<DetectedWord>& pred, const std::vector<DetectedWord>& gt) {
    if (gt.empty()) return 0.0;
    return char_error_total(pred, gt) / static_cast<double>(gt.size());
}

double psnr(const Image& a, const Image& b) {
    const double mse = image_mse(a, b);
    if (mse < 1e-10) return 99.0;
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
    constexpr int kWin = 11;
    constexpr int kRad = kWin / 2;
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;
    if (a.width < kWin || a.height < kWin) throw std::invalid_argument("ssim: image smaller than 11x11 window");

    double window[kWin][kWin];
    double wsum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        for (int j = 0; j < kWin; ++j) {
            const double dy = i - kRad, dx = j - kRad;
            window[i][j] = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
            wsum += window[i][j];
        }
    }
    for (auto& row : window)
        for (double& w : row) w /= wsum;

    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        std::size_t count = 0;
        for (int y = kRad; y < a.height - kRad; ++y) {
            for (int x = kRad; x < a.width - kRad; ++x) {
                double mu_a = 0, mu_b = 0;
                for (int i = 0; i < kWin; ++i)
                    for (int j = 0; j < kWin; ++j) {
                        mu_a += window[i][j] * a.at(x + j - kRad, y + i - kRad, c);
                        mu_b += window[i][j] * b.at(x + j - kRad, y + i - kRad, c);
                    }
                double var_a = 0, var_b = 0, cov = 0;
                for (int i = 0; i < kWin; ++i)
                    for (int j = 0; j < kWin; ++j) {
                        const double da = a.at(x + j - kRad, y + i - kRad, c) - mu_a;
                        const double db = b.at(x + j - kRad, y + i - kRad, c) - mu_b;
                        var_a += window[i][j] * da * da;
                        var_b += window[i][j] * db * db;
                        cov += window[i][j] * da * db;
                    }
                const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
                const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
                acc += num / den;
                ++count;
            }
        }
        total += acc / static_cast<double>(count);
    }
    return total / 3.0;
}

double sharpness(const Image& a) {
    if (a.width < 3 || a.height < 3) return 0.0;
    double acc = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < 3; ++c) {
        for (int y = 1; y < a.height - 1; ++y) {
            for (int x = 1; x < a.width - 1; ++x) {
                const double lap = a.at(x, y - 1, c) + a.at(x - 1, y, c) + a.at(x + 1, y, c) +
                                   a.at(x, y + 1, c) - 4.0 * a.at(x, y, c);
                acc += lap * lap;
                ++count;
            }
        }
    }
    return acc / static_cast<double>(count);
}

}  // namespace glyphlab::evaluation
