#pragma once

#include "glyphlab/image.hpp"

#include <string>
#include <vector>

namespace glyphlab::plots {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal chart rendering; axes, ticks and one polyline/point-set per
// series, written as a PNG.
Image line_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                 int width = 640, int height = 420);
Image scatter_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                    int width = 640, int height = 420);

// Tiles images into a rows x cols grid with 2 px gutters.
Image image_grid(const std::vector<Image>& tiles, int cols);

}  // namespace glyphlab::plots
