#pragma once

#include <string>

namespace glyphlab::corpus {

// Embedded 5x7 dot-matrix font covering uppercase A-Z and digits 0-9.
// Glyphs are rendered by integer block scaling (no anti-aliasing), which is
// what makes exact template-matching OCR possible.
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

// Horizontal advance between glyph origins at scale s is 6*s (5*s of glyph
// plus s of spacing); a word of n glyphs spans 6*s*n - s pixels.
inline int glyph_advance(int scale) { return 6 * scale; }
inline int word_pixel_width(int n_chars, int scale) { return 6 * scale * n_chars - scale; }
inline int word_pixel_height(int scale) { return kGlyphHeight * scale; }

const std::string& font_charset();  // "A".."Z" then "0".."9"

// Index into the charset, or -1 for unsupported characters.
int glyph_index(char c);

// Bit at (row, col) of the glyph for charset index gi.
bool glyph_bit(int gi, int row, int col);

}  // namespace glyphlab::corpus
