#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chunkwise/pdf/document.hpp"

namespace chunkwise::pdf {

struct Glyph {
    std::uint32_t code = 0;
    std::string text;      // UTF-8, may be empty when unmappable
    double advance = 0.0;  // horizontal displacement in text space for a 1-unit font
    bool word_space = false;  // single-byte code 32, receives Tw
};

/// Font resource reduced to what text extraction needs: code splitting,
/// Unicode mapping, advance widths and style flags.
class Font {
public:
    static std::shared_ptr<const Font> load(const Document& doc, const Object& font_dict);
    // Used when a Tf names a font missing from the resources.
    static std::shared_ptr<const Font> fallback();

    std::vector<Glyph> decode(std::string_view bytes) const;

    const std::string& name() const { return name_; }
    bool bold() const { return bold_; }
    bool italic() const { return italic_; }
    bool mono() const { return mono_; }
    double ascent() const { return ascent_; }
    double descent() const { return descent_; }

private:
    std::string unicode_for(std::uint32_t code) const;
    double width_for(std::uint32_t code) const;

    std::string name_;
    bool bold_ = false;
    bool italic_ = false;
    bool mono_ = false;
    bool composite_ = false;
    double ascent_ = 0.8;
    double descent_ = -0.2;
    double width_scale_ = 0.001;
    double default_width_ = 500.0;
    // Code byte-lengths for composite fonts, from codespace ranges.
    std::vector<std::pair<std::string, std::string>> codespace_;
    std::map<std::uint32_t, std::string> to_unicode_;
    std::vector<std::string> simple_unicode_;  // 256 entries for simple fonts
    std::vector<const char*> glyph_names_;     // 256 entries for simple fonts
    std::map<std::uint32_t, double> widths_;
    const void* std_metrics_ = nullptr;
};

// Exposed for tests.
std::string glyph_name_to_utf8(std::string_view name);
std::string utf16be_to_utf8(std::string_view bytes);
std::string pdf_text_string_to_utf8(std::string_view bytes);
void append_utf8(std::string& out, std::uint32_t cp);

}  // namespace chunkwise::pdf
