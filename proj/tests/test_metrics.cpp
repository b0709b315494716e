#include "glyphlab/metrics.hpp"
#include "glyphlab/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace glyphlab;
using namespace glyphlab::evaluation;

namespace {

// Independent brute-force oracle: plain recursion, no memoization.
int edit_distance_brute(const std::string& a, const std::string& b) {
    if (a.empty()) return static_cast<int>(b.size());
    if (b.empty()) return static_cast<int>(a.size());
    const int del = edit_distance_brute(a.substr(1), b) + 1;
    const int ins = edit_distance_brute(a, b.substr(1)) + 1;
    const int sub = edit_distance_brute(a.substr(1), b.substr(1)) + (a[0] != b[0] ? 1 : 0);
    return std::min({del, ins, sub});
}

std::string random_word(Rng& rng, int max_len) {
    const int len = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_len + 1)));
    std::string s;
    for (int i = 0; i < len; ++i) s += static_cast<char>('a' + rng.uniform_int(4));  // small alphabet
    return s;
}

guidance::NormalizedBox unit_box(double x0, double y0, double w, double h) { return {x0, y0, x0 + w, y0 + h}; }

}  // namespace

TEST_CASE("edit distance basics") {
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("abc", "") == 3);
    CHECK(edit_distance("", "") == 0);
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("same", "same") == 0);
}

TEST_CASE("edit distance matches brute-force recursion on short strings") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string a = random_word(rng, 7);
        const std::string b = random_word(rng, 7);
        CHECK(edit_distance(a, b) == edit_distance_brute(a, b));
    }
}

TEST_CASE("edit distance is a metric") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string a = random_word(rng, 12);
        const std::string b = random_word(rng, 12);
        const std::string c = random_word(rng, 12);
        const int ab = edit_distance(a, b);
        const int ba = edit_distance(b, a);
        CHECK(ab == ba);
        CHECK((ab == 0) == (a == b));
        CHECK(ab <= edit_distance(a, c) + edit_distance(c, b));
    }
}

TEST_CASE("word_f1 forced examples") {
    const guidance::NormalizedBox box = unit_box(0.1, 0.1, 0.3, 0.1);
    SUBCASE("perfect match") {
        const auto r = word_f1({{"HSBC", box}}, {{"hsbc", box}});
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.f1 == 1.0);
    }
    SUBCASE("extra prediction") {
        const auto r = word_f1({{"HSBC", box}, {"BANK", unit_box(0.6, 0.6, 0.3, 0.1)}}, {{"HSBC", box}});
        CHECK(r.precision == doctest::Approx(0.5));
        CHECK(r.recall == doctest::Approx(1.0));
        CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("empty sides") {
        const auto none = word_f1({}, {{"HSBC", box}});
        CHECK(none.precision == 0.0);
        CHECK(none.recall == 0.0);
        CHECK(none.f1 == 0.0);
        const auto both_empty = word_f1({}, {});
        CHECK(both_empty.precision == 1.0);
        CHECK(both_empty.recall == 1.0);
        CHECK(both_empty.f1 == 1.0);
    }
    SUBCASE("string equal but low IoU does not match") {
        const auto r = word_f1({{"HSBC", unit_box(0.6, 0.6, 0.3, 0.1)}}, {{"HSBC", box}});
        CHECK(r.f1 == 0.0);
    }
}

TEST_CASE("f1 identities") {
    Rng rng(31);
    const guidance::NormalizedBox box = unit_box(0.1, 0.1, 0.3, 0.1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DetectedWord> pred, gt;
        const int np = static_cast<int>(rng.uniform_int(4));
        const int ng = static_cast<int>(rng.uniform_int(4));
        for (int i = 0; i < np; ++i) pred.push_back({random_word(rng, 4), unit_box(0.2 * i, 0.1, 0.15, 0.1)});
        for (int i = 0; i < ng; ++i) gt.push_back({random_word(rng, 4), unit_box(0.2 * i, 0.1, 0.15, 0.1)});
        const auto r = word_f1(pred, gt);
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= 1.0);
        if (r.f1 == 1.0) {
            CHECK(r.precision == 1.0);
            CHECK(r.recall == 1.0);
        }
        if (r.precision == 0.0 || r.recall == 0.0) CHECK(r.f1 == 0.0);
    }
}

TEST_CASE("char accuracy") {
    const guidance::NormalizedBox box = unit_box(0.1, 0.1, 0.3, 0.1);
    CHECK(char_accuracy({{"HSBC", box}}, {{"HSBC", box}}) == 1.0);
    CHECK(char_accuracy({}, {{"HSBC", box}}) == 0.0);
    CHECK(char_accuracy({{"HSBD", box}}, {{"HSBC", box}}) == doctest::Approx(0.75));
    CHECK(mean_edit_distance({{"HSBD", box}}, {{"HSBC", box}}) == doctest::Approx(1.0));
}

TEST_CASE("psnr") {
    Image a(16, 16, 0.5);
    CHECK(psnr(a, a) == 99.0);
    Image b = a;
    for (double& v : b.pixels) v += 0.1;  // MSE = 0.01
    CHECK(psnr(a, b) == doctest::Approx(20.0).epsilon(1e-9));

    // Strictly decreasing in MSE.
    Image c = a;
    for (double& v : c.pixels) v += 0.2;
    CHECK(psnr(a, c) < psnr(a, b));
}

TEST_CASE("ssim") {
    Image a(32, 32);
    Rng rng(7);
    for (double& v : a.pixels) v = rng.uniform();
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    Image noisy = a;
    add_gaussian_noise(noisy, 0.1, rng);
    clamp01(noisy);
    CHECK(ssim(a, noisy) < 1.0);
    Image wrong(16, 16);
    CHECK_THROWS(ssim(a, wrong));
}

TEST_CASE("sharpness prefers edges over blur") {
    Image flat(32, 32, 0.5);
    CHECK(sharpness(flat) == 0.0);
    Image edges(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            for (int c = 0; c < 3; ++c) edges.at(x, y, c) = (x / 4) % 2 ? 1.0 : 0.0;
    const Image blurred = gaussian_blur(edges, 2.0);
    CHECK(sharpness(edges) > sharpness(blurred));
    CHECK(sharpness(blurred) > 0.0);
}
