#pragma once

#include <cstddef>
#include <cstdint>

// Static Adobe data: base encodings (glyph names), the glyph list, and the
// standard 14 font metrics.
namespace chunkwise::pdf::tables {

struct GlyphCode {
    const char* name;
    std::uint32_t code;
};

struct GlyphWidth {
    const char* name;
    int width;
};

struct StdFont {
    const char* name;
    int ascent;
    int descent;
    bool bold;
    bool italic;
    bool mono;
    bool symbolic;
    const GlyphWidth* widths;
    std::size_t width_count;
};

extern const char* const kStandardEncoding[256];
extern const char* const kWinAnsiEncoding[256];
extern const char* const kMacRomanEncoding[256];
extern const char* const kSymbolEncoding[256];
extern const char* const kZapfDingbatsEncoding[256];
extern const char* const kPDFDocEncoding[256];

extern const GlyphCode kGlyphList[];
extern const std::size_t kGlyphListSize;

extern const StdFont kStdFonts[];
extern const std::size_t kStdFontCount;

}  // namespace chunkwise::pdf::tables
