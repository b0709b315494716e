#pragma once

#include "glyphlab/rng.hpp"
#include "glyphlab/tensor.hpp"

#include <cstdint>
#include <vector>

namespace glyphlab {

// Interleaved RGB image, values in [0,1], row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // height*width*3

    Image() = default;
    Image(int w, int h, double fill = 0.0) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    double& at(int x, int y, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    double at(int x, int y, int c) const { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// Luma (Rec. 601) as a flat height*width array.
std::vector<double> to_luma(const Image& img);

// Snap every channel to the nearest 8-bit level so a PNG round-trip is exact.
void quantize8(Image& img);

Image gaussian_blur(const Image& img, double sigma);

// Box-average downsample by an integer factor (dimensions must divide).
Image downsample_box(const Image& img, int factor);

// Catmull-Rom bicubic resize to an arbitrary size, edge-clamped.
Image resize_bicubic(const Image& img, int out_w, int out_h);

void add_gaussian_noise(Image& img, double std_dev, Rng& rng);

void clamp01(Image& img);

// [0,1] HWC image <-> [-1,1] CHW latent.
Tensor image_to_latent(const Image& img);
Image latent_to_image(const Tensor& t);

double image_mse(const Image& a, const Image& b);

}  // namespace glyphlab
