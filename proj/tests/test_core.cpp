#include "glyphlab/image.hpp"
#include "glyphlab/png_io.hpp"
#include "glyphlab/rng.hpp"
#include "glyphlab/toml.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace glyphlab;

TEST_CASE("rng streams are deterministic and serializable") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

    Rng c(7);
    c.normal();
    c.uniform();
    const std::string state = c.serialize();
    Rng d;
    d.deserialize(state);
    for (int i = 0; i < 50; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("rng moments are sane") {
    Rng rng(1);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("toml round-trip and overrides") {
    toml::Document d;
    d["seed"] = toml::Value(7);
    d["train.lr"] = toml::Value(2e-4);
    d["train.name"] = toml::Value("phase [a], \"quoted\"");
    d["model.widths"] = toml::Value(std::vector<toml::Value>{toml::Value(8), toml::Value(16)});
    d["train.resume"] = toml::Value(false);

    const std::string text = toml::serialize(d);
    const toml::Document back = toml::parse(text);
    CHECK(back.at("seed").as_int() == 7);
    CHECK(back.at("train.lr").as_float() == doctest::Approx(2e-4));
    CHECK(back.at("train.name").as_string() == "phase [a], \"quoted\"");
    CHECK(back.at("model.widths").as_array().size() == 2);
    CHECK(back.at("train.resume").as_bool() == false);

    const auto [key, value] = toml::parse_override("train.lr=1e-3");
    CHECK(key == "train.lr");
    CHECK(value.as_float() == doctest::Approx(1e-3));
}

TEST_CASE("png round-trip is pixel exact for quantized images") {
    Image img(17, 13);
    Rng rng(3);
    for (double& v : img.pixels) v = rng.uniform();
    quantize8(img);
    const std::string path = (std::filesystem::temp_directory_path() / "glyphlab_png_test.png").string();
    write_png(path, img);
    const Image back = read_png(path);
    REQUIRE(back.same_shape(img));
    for (std::size_t i = 0; i < img.pixels.size(); ++i) CHECK(back.pixels[i] == img.pixels[i]);
    std::filesystem::remove(path);
}

TEST_CASE("latent conversion is inverse on the valid range") {
    Image img(8, 8);
    Rng rng(5);
    for (double& v : img.pixels) v = rng.uniform();
    const Tensor lat = image_to_latent(img);
    const Image back = latent_to_image(lat);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) CHECK(back.pixels[i] == doctest::Approx(img.pixels[i]).epsilon(1e-12));
}

TEST_CASE("downsample/upsample identity at factor 1") {
    Image img(16, 16);
    Rng rng(9);
    for (double& v : img.pixels) v = rng.uniform();
    const Image down = downsample_box(img, 1);
    const Image up = resize_bicubic(down, 16, 16);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) CHECK(std::abs(up.pixels[i] - img.pixels[i]) < 1e-12);
}
