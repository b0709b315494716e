#pragma once

#include "glyphlab/model.hpp"

#include <string>

namespace glyphlab::denoiser {

// Named-tensor archive: a directory holding manifest.json (parameter path,
// shape, dtype, group, freeze flag, byte offset) and weights.bin, one
// little-endian float32 blob. Round-trips bit-exactly at float32 precision.
void save_checkpoint(const std::string& dir, const DenoiserParams& params);
DenoiserParams load_checkpoint(const std::string& dir);

}  // namespace glyphlab::denoiser
