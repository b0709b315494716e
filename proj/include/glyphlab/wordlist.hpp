#pragma once

#include <string>
#include <vector>

namespace glyphlab::corpus {

// The embedded corpus vocabulary: 1000 common English words, uppercased,
// 3-8 characters, A-Z only.
const std::vector<std::string>& word_list();

}  // namespace glyphlab::corpus
