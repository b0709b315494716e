#include "glyphlab/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glyphlab {

std::vector<double> to_luma(const Image& img) {
    std::vector<double> luma(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            luma[static_cast<std::size_t>(y) * img.width + x] =
                0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
        }
    }
    return luma;
}

void quantize8(Image& img) {
    for (double& v : img.pixels) {
        v = std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
    }
}

static int reflect(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

Image gaussian_blur(const Image& img, double sigma) {
    if (sigma <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    Image tmp(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    v += kernel[i + radius] * img.at(reflect(x + i, img.width), y, c);
                }
                tmp.at(x, y, c) = v;
            }
        }
    }
    Image out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    v += kernel[i + radius] * tmp.at(x, reflect(y + i, img.height), c);
                }
                out.at(x, y, c) = v;
            }
        }
    }
    return out;
}

Image downsample_box(const Image& img, int factor) {
    if (factor <= 0 || img.width % factor != 0 || img.height % factor != 0) {
        throw std::invalid_argument("downsample_box: factor must divide image dimensions");
    }
    if (factor == 1) return img;
    Image out(img.width / factor, img.height / factor);
    const double inv = 1.0 / (factor * factor);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (int dy = 0; dy < factor; ++dy)
                    for (int dx = 0; dx < factor; ++dx) v += img.at(x * factor + dx, y * factor + dy, c);
                out.at(x, y, c) = v * inv;
            }
        }
    }
    return out;
}

static double cubic_weight(double t) {
    // Catmull-Rom (a = -0.5)
    const double a = -0.5;
    t = std::abs(t);
    if (t <= 1.0) return (a + 2.0) * t * t * t - (a + 3.0) * t * t + 1.0;
    if (t < 2.0) return a * t * t * t - 5.0 * a * t * t + 8.0 * a * t - 4.0 * a;
    return 0.0;
}

Image resize_bicubic(const Image& img, int out_w, int out_h) {
    if (out_w == img.width && out_h == img.height) return img;
    Image out(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        const int y0 = static_cast<int>(std::floor(src_y));
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            const int x0 = static_cast<int>(std::floor(src_x));
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                double wsum = 0.0;
                for (int j = -1; j <= 2; ++j) {
                    const int yy = std::clamp(y0 + j, 0, img.height - 1);
                    const double wy = cubic_weight(src_y - (y0 + j));
                    for (int i = -1; i <= 2; ++i) {
                        const int xx = std::clamp(x0 + i, 0, img.width - 1);
                        const double w = wy * cubic_weight(src_x - (x0 + i));
                        v += w * img.at(xx, yy, c);
                        wsum += w;
                    }
                }
                out.at(x, y, c) = v / wsum;
            }
        }
    }
    return out;
}

void add_gaussian_noise(Image& img, double std_dev, Rng& rng) {
    if (std_dev <= 0.0) return;
    for (double& v : img.pixels) v += std_dev * rng.normal();
}

void clamp01(Image& img) {
    for (double& v : img.pixels) v = std::clamp(v, 0.0, 1.0);
}

Tensor image_to_latent(const Image& img) {
    Tensor t({3, img.height, img.width});
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) t.at3(c, y, x) = img.at(x, y, c) * 2.0 - 1.0;
    return t;
}

Image latent_to_image(const Tensor& t) {
    if (t.rank() != 3 || t.dim(0) != 3) throw std::invalid_argument("latent_to_image: expected [3,H,W]");
    Image img(t.dim(2), t.dim(1));
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) img.at(x, y, c) = std::clamp((t.at3(c, y, x) + 1.0) * 0.5, 0.0, 1.0);
    return img;
}

double image_mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("image_mse: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        s += d * d;
    }
    return s / static_cast<double>(a.pixels.size());
}

}  // namespace glyphlab
