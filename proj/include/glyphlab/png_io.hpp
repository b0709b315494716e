#pragma once

#include "glyphlab/image.hpp"

#include <string>

namespace glyphlab {

// 8-bit RGB PNG. Values are quantized to the 8-bit grid on write, so
// write_png followed by read_png is exact for already-quantized images.
void write_png(const std::string& path, const Image& img);
Image read_png(const std::string& path);

}  // namespace glyphlab
