#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace platebench::font {

constexpr int kGlyphWidth = 5;
constexpr int kGlyphHeight = 7;
constexpr int kGlyphCount = 36;

/// Recognition alphabet in tie-break order: letters before digits.
const std::string& alphabet();

/// Seven row bitmasks for a glyph; bit 4 is the leftmost column. Every glyph
/// has ink in all five columns and in rows 0 and 6, so a rendered character's
/// ink bounding box is exactly the scaled 5x7 cell. Throws
/// Error{Precondition} for characters outside A-Z0-9.
const std::array<std::uint8_t, 7>& glyph(char c);

/// True if (col, row) of the glyph cell is ink.
bool glyph_pixel(char c, int col, int row);

} // namespace platebench::font
