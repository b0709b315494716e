#include "glyphlab/guidance.hpp"
#include "glyphlab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace glyphlab;
using namespace glyphlab::guidance;

TEST_CASE("ping-pong policy: direct evaluation") {
    const GuidanceSchedule pp = GuidanceSchedule::pingpong(1, 0);
    CHECK(lambda_at(pp, 4, 1.0) == 0.0);
    CHECK(lambda_at(pp, 5, 1.0) == 1.0);

    const GuidanceSchedule pp2 = GuidanceSchedule::pingpong(2, 0);
    const double expected[8] = {0, 0, 1, 1, 0, 0, 1, 1};
    for (int t = 0; t < 8; ++t) CHECK(lambda_at(pp2, t, 1.0) == expected[t]);
}

TEST_CASE("ping-pong periodicity and phase lengths") {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const int tau = 1 + static_cast<int>(rng.uniform_int(5));
        const int t0 = static_cast<int>(rng.uniform_int(7));
        const GuidanceSchedule pp = GuidanceSchedule::pingpong(tau, t0);
        for (int t = 0; t < 40; ++t) {
            const double v = lambda_at(pp, t, 1.0);
            CHECK((v == 0.0 || v == 1.0));
            CHECK(lambda_at(pp, t + 2 * tau, 1.0) == v);
        }
        // Exactly tau consecutive equal values per phase.
        int run = 1;
        for (int t = t0 + 1; t < t0 + 6 * tau; ++t) {
            if (lambda_at(pp, t, 1.0) == lambda_at(pp, t - 1, 1.0)) {
                ++run;
            } else {
                CHECK(run == tau);
                run = 1;
            }
        }
    }
}

TEST_CASE("constant and ramp schedules") {
    CHECK(lambda_at(GuidanceSchedule::constant(0.3), 17, 2.0) == 0.3);
    const GuidanceSchedule r = GuidanceSchedule::ramp(10.0);
    CHECK(lambda_at(r, 0, 5.0) == doctest::Approx(0.5));
    CHECK(lambda_at(r, 0, 20.0) == 1.0);  // clamped
    CHECK_THROWS(GuidanceSchedule::constant(1.5));
    CHECK_THROWS(GuidanceSchedule::pingpong(0));
}

TEST_CASE("encode_text: determinism, empty string, distinct strings") {
    const Embedding empty = encode_text("");
    CHECK(empty.dim() == kEncoderDim);
    CHECK(empty.norm() == 0.0);

    const Embedding a1 = encode_text("HSBC bank sign");
    const Embedding a2 = encode_text("HSBC bank sign");
    REQUIRE(a1.dim() == a2.dim());
    for (int i = 0; i < a1.dim(); ++i) CHECK(a1.v[i] == a2.v[i]);
    CHECK(a1.norm() == doctest::Approx(1.0).epsilon(1e-12));

    const Embedding b1 = encode_text("HSBC");
    const Embedding b2 = encode_text("HSBD");
    double dot = 0;
    for (int i = 0; i < b1.dim(); ++i) dot += b1.v[i] * b2.v[i];
    CHECK(dot < 1.0 - 1e-9);  // differing trigram bags

    // Case-insensitive by construction.
    const Embedding c1 = encode_text("Bank");
    const Embedding c2 = encode_text("bank");
    for (int i = 0; i < c1.dim(); ++i) CHECK(c1.v[i] == c2.v[i]);
}

TEST_CASE("project: identity padding, zero, linearity") {
    Projection idpad(4, kEncoderDim);
    for (int i = 0; i < 4; ++i) idpad.w[static_cast<std::size_t>(i) * kEncoderDim + i] = 1.0;
    Embedding e(kEncoderDim);
    Rng rng(2);
    for (double& v : e.v) v = rng.normal();
    const Embedding p = project(idpad, e);
    REQUIRE(p.dim() == 4);
    for (int i = 0; i < 4; ++i) CHECK(p.v[i] == e.v[i]);

    const Projection zero(4, kEncoderDim);
    const Embedding z = project(zero, e);
    for (double v : z.v) CHECK(v == 0.0);

    Projection W(6, kEncoderDim);
    for (double& v : W.w) v = rng.normal();
    Embedding x(kEncoderDim), y(kEncoderDim);
    for (double& v : x.v) v = rng.normal();
    for (double& v : y.v) v = rng.normal();
    Embedding combo(kEncoderDim);
    for (int i = 0; i < kEncoderDim; ++i) combo.v[i] = 2.0 * x.v[i] - 3.0 * y.v[i];
    const Embedding lhs = project(W, combo);
    const Embedding px = project(W, x), py = project(W, y);
    for (int i = 0; i < 6; ++i) CHECK(lhs.v[i] == doctest::Approx(2.0 * px.v[i] - 3.0 * py.v[i]).epsilon(1e-9));

    Embedding wrong(10);
    CHECK_THROWS(project(W, wrong));
}

TEST_CASE("fuse_embeddings endpoints and midpoint") {
    Embedding t(2), im(2);
    t.v = {1.0, 0.0};
    im.v = {0.0, 1.0};
    const Embedding at0 = fuse_embeddings(t, im, 0.0);
    CHECK(at0.v[0] == 1.0);
    CHECK(at0.v[1] == 0.0);
    const Embedding at1 = fuse_embeddings(t, im, 1.0);
    CHECK(at1.v[0] == 0.0);
    CHECK(at1.v[1] == 1.0);
    const Embedding mid = fuse_embeddings(t, im, 0.5);
    CHECK(mid.v[0] == doctest::Approx(0.5));
    CHECK(mid.v[1] == doctest::Approx(0.5));

    Embedding bad(3);
    CHECK_THROWS(fuse_embeddings(t, bad, 0.5));
}

TEST_CASE("fusion is a convex combination in norm") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Embedding a(8), b(8);
        for (double& v : a.v) v = rng.normal();
        for (double& v : b.v) v = rng.normal();
        const double lam = rng.uniform();
        const Embedding f = fuse_embeddings(a, b, lam);
        CHECK(f.norm() <= std::max(a.norm(), b.norm()) + 1e-12);
    }
}

TEST_CASE("verbalize_position: grid mapping and tie rule") {
    CHECK(verbalize_position({0.45, 0.45, 0.55, 0.55}) == "center");
    CHECK(verbalize_position({0.05, 0.05, 0.15, 0.15}) == "top left");
    CHECK(verbalize_position({0.9, 0.4, 1.0, 0.6}) == "center right");
    CHECK(verbalize_position({0.4, 0.9, 0.6, 1.0}) == "bottom center");
    // Exactly 1/3 goes to the lower-index cell.
    const NormalizedBox tie{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    CHECK(verbalize_position(tie) == "top left");
    CHECK_THROWS(verbalize_position({1.0, 1.0, 1.5, 1.5}));
}

TEST_CASE("build_prompt_bundle renders the paper-style sentences") {
    const NormalizedBox center{0.4, 0.4, 0.6, 0.6};
    const PromptBundle b = build_prompt_bundle("a bank facade", {{"HSBC", center}}, guide_prompt_pos_hq());
    const std::string txt = b.text_prompt();
    CHECK(txt.find("HSBC is displayed at the center of the image") != std::string::npos);
    CHECK(txt.find(guide_prompt_pos_hq()) != std::string::npos);
    CHECK(b.image_prompt() == "a bank facade, " + guide_prompt_pos_hq());

    const PromptBundle empty = build_prompt_bundle("a bank facade", {}, guide_prompt_pos_hq());
    CHECK(empty.text_prompt() == guide_prompt_pos_hq());

    const PromptBundle two = build_prompt_bundle(
        "x", {{"AAA", {0.0, 0.0, 0.2, 0.2}}, {"BBB", {0.8, 0.8, 1.0, 1.0}}}, "g");
    const std::string two_txt = two.text_prompt();
    const auto pos_a = two_txt.find("AAA is displayed at the top left of the image");
    const auto pos_b = two_txt.find("BBB is displayed at the bottom right of the image");
    CHECK(pos_a != std::string::npos);
    CHECK(pos_b != std::string::npos);
    CHECK(pos_a < pos_b);
}

TEST_CASE("guide prompts carry the exact quadrant wording") {
    CHECK(guide_prompt_pos_hq() ==
          "Perfect image quality with perfectly preserved character outlines and precise positioning.");
    CHECK(guide_prompt_neg_hq() ==
          "Intentionally damaged character outlines and precise positioning, but good image quality.");
    CHECK(guide_prompt_pos_lq() == "Poor image quality, but preserved character outlines and precise positioning.");
    CHECK(guide_prompt_neg_lq() ==
          "Image quality is poor and character outlines and exact positions are intentionally damaged.");
    CHECK(guide_prompt_for(Quadrant::PosHQ) == guide_prompt_pos_hq());
}

TEST_CASE("neutral position phrase renders without a grid cell") {
    CHECK(render_cue_sentence("HSBC", kNeutralPosition) == "HSBC is displayed in the image");
    CHECK(!grid_cell_of_phrase(kNeutralPosition).has_value());
    CHECK(grid_cell_of_phrase("center").value() == std::make_pair(1, 1));
    CHECK(grid_cell_of_phrase("bottom right").value() == std::make_pair(2, 2));
}
