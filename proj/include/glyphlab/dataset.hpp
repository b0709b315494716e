#pragma once

#include "glyphlab/synth.hpp"

#include <string>
#include <vector>

namespace glyphlab::corpus {

inline constexpr const char* kDatasetSchemaVersion = "1";

// Layout:
//   root/images/{sample_id}_{quadrant}.png
//   root/lr/{sample_id}_{quadrant}_x{factor}.png
//   root/manifest.jsonl
//   root/schema_version
// Returns the manifest path. Round-trips pixel-exactly through read_dataset.
std::string write_dataset(const std::vector<CorpusSample>& samples, const std::string& root);

// Exact inverse of write_dataset. Throws on a schema_version mismatch.
std::vector<CorpusSample> read_dataset(const std::string& root);

}  // namespace glyphlab::corpus
