#include "glyphlab/plots.hpp"

#include "glyphlab/font.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace glyphlab::plots {

namespace {

const std::array<std::array<double, 3>, 6> kPalette = {{{0.12, 0.35, 0.75},
                                                        {0.82, 0.29, 0.13},
                                                        {0.16, 0.55, 0.25},
                                                        {0.55, 0.20, 0.60},
                                                        {0.85, 0.60, 0.10},
                                                        {0.15, 0.60, 0.60}}};

void put_pixel(Image& img, int x, int y, const std::array<double, 3>& c) {
    if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
    for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = c[ch];
}

void draw_line(Image& img, double x0, double y0, double x1, double y1, const std::array<double, 3>& c) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        put_pixel(img, static_cast<int>(std::lround(x0 + t * dx)), static_cast<int>(std::lround(y0 + t * dy)), c);
    }
}

void draw_text(Image& img, int x, int y, const std::string& text, const std::array<double, 3>& c) {
    int cx = x;
    for (char ch : text) {
        const int gi = corpus::glyph_index(ch);
        if (gi >= 0) {
            for (int r = 0; r < corpus::kGlyphHeight; ++r)
                for (int col = 0; col < corpus::kGlyphWidth; ++col)
                    if (corpus::glyph_bit(gi, r, col)) put_pixel(img, cx + col, y + r, c);
        }
        cx += corpus::glyph_advance(1);
    }
}

struct Frame {
    int x0, y0, x1, y1;  // plot area
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); }
    double py(double y) const { return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0); }
};

Frame setup_frame(Image& img, const std::vector<Series>& series, const std::string& x_label,
                  const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("chart: no series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("chart: series x/y size mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmin <= xmax)) throw std::invalid_argument("chart: empty series");
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    Frame f{48, 16, img.width - 12, img.height - 36, xmin, xmax, ymin, ymax};
    const std::array<double, 3> axis{0.25, 0.25, 0.25};
    draw_line(img, f.x0, f.y0, f.x0, f.y1, axis);
    draw_line(img, f.x0, f.y1, f.x1, f.y1, axis);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3G", ymax);
    draw_text(img, 4, f.y0, buf, axis);
    std::snprintf(buf, sizeof(buf), "%.3G", ymin);
    draw_text(img, 4, f.y1 - 8, buf, axis);
    std::snprintf(buf, sizeof(buf), "%.3G", xmin);
    draw_text(img, f.x0, f.y1 + 6, buf, axis);
    std::snprintf(buf, sizeof(buf), "%.3G", xmax);
    draw_text(img, f.x1 - 40, f.y1 + 6, buf, axis);
    draw_text(img, (f.x0 + f.x1) / 2 - 3 * static_cast<int>(x_label.size()), f.y1 + 16, x_label, axis);
    draw_text(img, 4, 4, y_label, axis);

    // Legend along the top edge.
    int lx = f.x0 + 8;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& c = kPalette[i % kPalette.size()];
        draw_line(img, lx, 10, lx + 12, 10, c);
        draw_text(img, lx + 16, 6, series[i].label, c);
        lx += 24 + 6 * static_cast<int>(series[i].label.size()) + 12;
    }
    return f;
}

}  // namespace

Image line_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                 int width, int height) {
    Image img(width, height, 1.0);
    const Frame f = setup_frame(img, series, x_label, y_label);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& c = kPalette[s % kPalette.size()];
        const Series& ser = series[s];
        for (std::size_t i = 1; i < ser.x.size(); ++i) {
            draw_line(img, f.px(ser.x[i - 1]), f.py(ser.y[i - 1]), f.px(ser.x[i]), f.py(ser.y[i]), c);
        }
    }
    quantize8(img);
    return img;
}

Image scatter_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                    int width, int height) {
    Image img(width, height, 1.0);
    const Frame f = setup_frame(img, series, x_label, y_label);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& c = kPalette[s % kPalette.size()];
        const Series& ser = series[s];
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            const int x = static_cast<int>(std::lround(f.px(ser.x[i])));
            const int y = static_cast<int>(std::lround(f.py(ser.y[i])));
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx)
                    if (std::abs(dx) + std::abs(dy) <= 2) put_pixel(img, x + dx, y + dy, c);
        }
    }
    quantize8(img);
    return img;
}

Image image_grid(const std::vector<Image>& tiles, int cols) {
    if (tiles.empty()) throw std::invalid_argument("image_grid: no tiles");
    if (cols < 1) throw std::invalid_argument("image_grid: cols must be >= 1");
    const int tw = tiles[0].width, th = tiles[0].height;
    for (const Image& t : tiles) {
        if (t.width != tw || t.height != th) throw std::invalid_argument("image_grid: tiles must share a size");
    }
    const int rows = (static_cast<int>(tiles.size()) + cols - 1) / cols;
    const int gutter = 2;
    Image out(cols * tw + (cols + 1) * gutter, rows * th + (rows + 1) * gutter, 1.0);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const int r = static_cast<int>(i) / cols, c = static_cast<int>(i) % cols;
        const int ox = gutter + c * (tw + gutter), oy = gutter + r * (th + gutter);
        for (int y = 0; y < th; ++y)
            for (int x = 0; x < tw; ++x)
                for (int ch = 0; ch < 3; ++ch) out.at(ox + x, oy + y, ch) = tiles[i].at(x, y, ch);
    }
    quantize8(out);
    return out;
}

}  // namespace glyphlab::plots
