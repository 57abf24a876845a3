#include "font.hpp"

#include <algorithm>
#include <cstring>

#include "lexer.hpp"
#include "std_tables.hpp"

namespace chunkwise::pdf {

namespace {

using tables::StdFont;

bool contains_ci(std::string_view hay, std::string_view needle) {
    auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) ==
                                                      std::tolower(static_cast<unsigned char>(b)); });
    return it != hay.end();
}

std::uint32_t lookup_glyph_list(std::string_view name) {
    const auto* begin = tables::kGlyphList;
    const auto* end = tables::kGlyphList + tables::kGlyphListSize;
    auto it = std::lower_bound(begin, end, name, [](const tables::GlyphCode& g, std::string_view n) {
        return std::string_view(g.name) < n;
    });
    if (it != end && std::string_view(it->name) == name) return it->code;
    return 0;
}

const StdFont* find_std_font(std::string_view base) {
    // Common aliases used by office software for the base 14 faces.
    std::string key;
    const bool bold = contains_ci(base, "bold") || contains_ci(base, "black") || contains_ci(base, "heavy");
    const bool italic = contains_ci(base, "italic") || contains_ci(base, "oblique");
    if (contains_ci(base, "courier") || contains_ci(base, "mono")) {
        key = bold ? (italic ? "Courier-BoldOblique" : "Courier-Bold") : (italic ? "Courier-Oblique" : "Courier");
    } else if (contains_ci(base, "times") || (contains_ci(base, "serif") && !contains_ci(base, "sans"))) {
        key = bold ? (italic ? "Times-BoldItalic" : "Times-Bold") : (italic ? "Times-Italic" : "Times-Roman");
    } else if (contains_ci(base, "symbol")) {
        key = "Symbol";
    } else if (contains_ci(base, "zapf") || contains_ci(base, "dingbat")) {
        key = "ZapfDingbats";
    } else if (contains_ci(base, "helvetica") || contains_ci(base, "arial")) {
        key = bold ? (italic ? "Helvetica-BoldOblique" : "Helvetica-Bold")
                   : (italic ? "Helvetica-Oblique" : "Helvetica");
    } else {
        return nullptr;
    }
    for (std::size_t i = 0; i < tables::kStdFontCount; ++i) {
        if (key == tables::kStdFonts[i].name) return &tables::kStdFonts[i];
    }
    return nullptr;
}

int std_width(const StdFont* font, const char* glyph) {
    if (!font || !glyph) return -1;
    auto* begin = font->widths;
    auto* end = font->widths + font->width_count;
    auto it = std::lower_bound(begin, end, std::string_view(glyph), [](const tables::GlyphWidth& g, std::string_view n) {
        return std::string_view(g.name) < n;
    });
    if (it != end && std::string_view(it->name) == glyph) return it->width;
    return -1;
}

const char* const* base_encoding(std::string_view name) {
    if (name == "WinAnsiEncoding") return tables::kWinAnsiEncoding;
    if (name == "MacRomanEncoding") return tables::kMacRomanEncoding;
    if (name == "StandardEncoding") return tables::kStandardEncoding;
    if (name == "PDFDocEncoding") return tables::kPDFDocEncoding;
    return nullptr;
}

std::uint32_t bytes_to_code(std::string_view b) {
    std::uint32_t v = 0;
    for (unsigned char c : b) v = (v << 8) | c;
    return v;
}

// Parses a ToUnicode or encoding CMap program.
void parse_cmap(std::string_view data, std::map<std::uint32_t, std::string>* mapping,
                std::vector<std::pair<std::string, std::string>>* codespace) {
    Lexer lex(data);
    std::vector<Token> operands;
    for (;;) {
        Token t = lex.next();
        if (t.kind == TokenKind::End) break;
        if (t.kind != TokenKind::Keyword) {
            if (t.kind == TokenKind::ArrayOpen) {
                // bfrange destination arrays
                Token arr;
                arr.kind = TokenKind::ArrayOpen;
                operands.push_back(arr);
                continue;
            }
            operands.push_back(std::move(t));
            continue;
        }
        if (t.text == "begincodespacerange") {
            for (;;) {
                Token lo = lex.next();
                if (lo.kind != TokenKind::String) break;
                Token hi = lex.next();
                if (codespace) codespace->emplace_back(lo.text, hi.text);
            }
        } else if (t.text == "beginbfchar" && mapping) {
            for (;;) {
                Token src = lex.next();
                if (src.kind != TokenKind::String) break;
                Token dst = lex.next();
                std::string text;
                if (dst.kind == TokenKind::String) text = utf16be_to_utf8(dst.text);
                else if (dst.kind == TokenKind::Name) text = glyph_name_to_utf8(dst.text);
                (*mapping)[bytes_to_code(src.text)] = text;
            }
        } else if (t.text == "beginbfrange" && mapping) {
            for (;;) {
                Token lo = lex.next();
                if (lo.kind != TokenKind::String) break;
                Token hi = lex.next();
                Token dst = lex.next();
                const std::uint32_t a = bytes_to_code(lo.text);
                const std::uint32_t b = bytes_to_code(hi.text);
                if (b < a || b - a > 65535) {
                    if (dst.kind == TokenKind::ArrayOpen) {
                        while (lex.next().kind != TokenKind::ArrayClose && !lex.at_end()) {
                        }
                    }
                    continue;
                }
                if (dst.kind == TokenKind::String) {
                    std::string base = dst.text;
                    for (std::uint32_t c = a; c <= b; ++c) {
                        (*mapping)[c] = utf16be_to_utf8(base);
                        // Increment the last byte of the destination.
                        if (!base.empty()) base.back() = static_cast<char>(static_cast<unsigned char>(base.back()) + 1);
                    }
                } else if (dst.kind == TokenKind::ArrayOpen) {
                    std::uint32_t c = a;
                    for (;;) {
                        Token item = lex.next();
                        if (item.kind == TokenKind::ArrayClose || item.kind == TokenKind::End) break;
                        if (item.kind == TokenKind::String && c <= b) (*mapping)[c] = utf16be_to_utf8(item.text);
                        ++c;
                    }
                }
            }
        }
        operands.clear();
    }
}

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string utf16be_to_utf8(std::string_view bytes) {
    std::string out;
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
        std::uint32_t u = (static_cast<unsigned char>(bytes[i]) << 8) | static_cast<unsigned char>(bytes[i + 1]);
        if (u >= 0xD800 && u < 0xDC00 && i + 3 < bytes.size()) {
            const std::uint32_t lo =
                (static_cast<unsigned char>(bytes[i + 2]) << 8) | static_cast<unsigned char>(bytes[i + 3]);
            if (lo >= 0xDC00 && lo < 0xE000) {
                u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
                i += 2;
            }
        }
        append_utf8(out, u);
    }
    if (bytes.size() == 1) append_utf8(out, static_cast<unsigned char>(bytes[0]));
    return out;
}

std::string pdf_text_string_to_utf8(std::string_view bytes) {
    if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFE &&
        static_cast<unsigned char>(bytes[1]) == 0xFF) {
        return utf16be_to_utf8(bytes.substr(2));
    }
    if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") return std::string(bytes.substr(3));
    std::string out;
    for (unsigned char c : bytes) {
        const char* name = tables::kPDFDocEncoding[c];
        if (c < 0x80 && c >= 0x20) {
            out += static_cast<char>(c);
        } else if (name) {
            out += glyph_name_to_utf8(name);
        } else if (c == '\n' || c == '\r' || c == '\t') {
            out += ' ';
        }
    }
    return out;
}

std::string glyph_name_to_utf8(std::string_view name) {
    std::string out;
    if (name.empty()) return out;
    // Drop suffixes such as ".sc" or ".alt".
    if (auto dot = name.find('.'); dot != std::string_view::npos && dot > 0) name = name.substr(0, dot);
    if (name.find('_') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= name.size()) {
            const std::size_t end = std::min(name.find('_', start), name.size());
            out += glyph_name_to_utf8(name.substr(start, end - start));
            start = end + 1;
        }
        return out;
    }
    if (std::uint32_t cp = lookup_glyph_list(name)) {
        append_utf8(out, cp);
        return out;
    }
    auto hex_run = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
    };
    if (name.size() >= 7 && name.substr(0, 3) == "uni" && (name.size() - 3) % 4 == 0 && hex_run(name.substr(3))) {
        for (std::size_t i = 3; i + 4 <= name.size(); i += 4) {
            append_utf8(out, static_cast<std::uint32_t>(std::stoul(std::string(name.substr(i, 4)), nullptr, 16)));
        }
        return out;
    }
    if (name.size() >= 5 && name.size() <= 7 && name[0] == 'u' && hex_run(name.substr(1))) {
        append_utf8(out, static_cast<std::uint32_t>(std::stoul(std::string(name.substr(1)), nullptr, 16)));
    }
    return out;
}

std::shared_ptr<const Font> Font::fallback() {
    static const std::shared_ptr<const Font> font = [] {
        auto f = std::make_shared<Font>();
        f->name_ = "Helvetica";
        f->std_metrics_ = find_std_font("Helvetica");
        f->glyph_names_.assign(tables::kStandardEncoding, tables::kStandardEncoding + 256);
        f->simple_unicode_.resize(256);
        for (int c = 0; c < 256; ++c) {
            if (f->glyph_names_[c]) f->simple_unicode_[c] = glyph_name_to_utf8(f->glyph_names_[c]);
        }
        f->ascent_ = 0.718;
        f->descent_ = -0.207;
        return f;
    }();
    return font;
}

std::shared_ptr<const Font> Font::load(const Document& doc, const Object& font_ref) {
    auto font = std::make_shared<Font>();
    const Object dict = doc.resolve(font_ref);
    const std::string subtype = doc.get(dict, "Subtype").as_name();
    std::string base = doc.get(dict, "BaseFont").as_name();
    if (base.size() > 7 && base[6] == '+') base = base.substr(7);
    font->name_ = base.empty() ? std::string(doc.get(dict, "Name").as_name()) : base;

    Object descendant;
    Object descriptor = doc.get(dict, "FontDescriptor");
    font->composite_ = subtype == "Type0";
    if (font->composite_) {
        const Array& desc = doc.get(dict, "DescendantFonts").as_array();
        if (!desc.empty()) descendant = doc.resolve(desc[0]);
        descriptor = doc.get(descendant, "FontDescriptor");
    }

    const StdFont* std_font = find_std_font(font->name_);
    font->std_metrics_ = std_font;

    // Style: descriptor flags first, then name substrings.
    const std::int64_t flags = doc.get(descriptor, "Flags").as_int(0);
    const double weight = doc.get(descriptor, "FontWeight").as_number(0);
    const double italic_angle = doc.get(descriptor, "ItalicAngle").as_number(0);
    const std::string& n = font->name_;
    font->bold_ = (flags & (1 << 18)) != 0 || weight >= 600 || contains_ci(n, "bold") || contains_ci(n, "black") ||
                 contains_ci(n, "heavy");
    font->italic_ = (flags & 64) != 0 || italic_angle != 0.0 || contains_ci(n, "italic") || contains_ci(n, "oblique");
    font->mono_ = (flags & 1) != 0 || contains_ci(n, "mono") || contains_ci(n, "courier");

    // Vertical metrics.
    double ascent = doc.get(descriptor, "Ascent").as_number(0);
    double descent = doc.get(descriptor, "Descent").as_number(0);
    if (ascent == 0 && std_font) ascent = std_font->ascent;
    if (descent == 0 && std_font) descent = std_font->descent;
    if (ascent > 500 && ascent < 1200) font->ascent_ = ascent / 1000.0;
    if (descent < 0 && descent > -500) font->descent_ = descent / 1000.0;

    // Unicode mapping.
    const Object to_unicode = doc.get(dict, "ToUnicode");
    if (to_unicode.is_stream()) {
        parse_cmap(doc.stream_data(to_unicode), &font->to_unicode_, &font->codespace_);
    }

    if (font->composite_) {
        font->codespace_.clear();
        const Object enc = doc.get(dict, "Encoding");
        if (enc.is_stream()) parse_cmap(doc.stream_data(enc), nullptr, &font->codespace_);
        if (font->codespace_.empty()) font->codespace_.emplace_back(std::string("\x00\x00", 2), "\xFF\xFF");
        font->default_width_ = doc.get(descendant, "DW").as_number(1000);
        const Array& w = doc.get(descendant, "W").as_array();
        for (std::size_t i = 0; i < w.size();) {
            const Object first = doc.resolve(w[i]);
            if (i + 1 >= w.size()) break;
            const Object second = doc.resolve(w[i + 1]);
            if (second.is_array()) {
                std::uint32_t c = static_cast<std::uint32_t>(first.as_int());
                for (const auto& v : second.as_array()) font->widths_[c++] = doc.resolve(v).as_number();
                i += 2;
            } else {
                if (i + 2 >= w.size()) break;
                const auto lo = static_cast<std::uint32_t>(first.as_int());
                const auto hi = static_cast<std::uint32_t>(second.as_int());
                const double width = doc.resolve(w[i + 2]).as_number();
                for (std::uint32_t c = lo; c <= hi && c - lo < 65536; ++c) font->widths_[c] = width;
                i += 3;
            }
        }
        return font;
    }

    // Simple fonts: base encoding plus differences.
    const char* const* base_enc = nullptr;
    const Object enc = doc.get(dict, "Encoding");
    Array differences;
    if (enc.is_name()) {
        base_enc = base_encoding(enc.as_name());
    } else if (enc.is_dict()) {
        base_enc = base_encoding(doc.get(enc, "BaseEncoding").as_name());
        differences = doc.get(enc, "Differences").as_array();
    }
    if (!base_enc) {
        if (std_font && std::string_view(std_font->name) == "Symbol") base_enc = tables::kSymbolEncoding;
        else if (std_font && std::string_view(std_font->name) == "ZapfDingbats") base_enc = tables::kZapfDingbatsEncoding;
        else if (subtype == "TrueType" && !(flags & 4)) base_enc = tables::kWinAnsiEncoding;
        else base_enc = tables::kStandardEncoding;
    }
    font->glyph_names_.assign(base_enc, base_enc + 256);
    std::vector<std::string> diff_names;
    int code = 0;
    std::vector<std::string> owned_names(256);
    for (const auto& item_ref : differences) {
        const Object item = doc.resolve(item_ref);
        if (item.is_number()) {
            code = static_cast<int>(item.as_int());
        } else if (item.is_name() && code >= 0 && code < 256) {
            owned_names[code] = item.as_name();
            ++code;
        }
    }
    font->simple_unicode_.resize(256);
    for (int c = 0; c < 256; ++c) {
        if (!owned_names[c].empty()) {
            font->simple_unicode_[c] = glyph_name_to_utf8(owned_names[c]);
            // Width lookups by glyph name only apply to base-encoding names.
            font->glyph_names_[c] = nullptr;
            if (std_font) {
                for (std::size_t k = 0; k < std_font->width_count; ++k) {
                    if (owned_names[c] == std_font->widths[k].name) {
                        font->glyph_names_[c] = std_font->widths[k].name;
                        break;
                    }
                }
            }
        } else if (font->glyph_names_[c]) {
            font->simple_unicode_[c] = glyph_name_to_utf8(font->glyph_names_[c]);
        } else if (c >= 0x20 && c < 0x7F) {
            font->simple_unicode_[c] = std::string(1, static_cast<char>(c));
        }
    }

    if (subtype == "Type3") {
        const Array& m = doc.get(dict, "FontMatrix").as_array();
        if (m.size() >= 4) font->width_scale_ = std::abs(doc.resolve(m[0]).as_number(0.001));
    }
    const Array& widths = doc.get(dict, "Widths").as_array();
    const auto first_char = doc.get(dict, "FirstChar").as_int(0);
    for (std::size_t i = 0; i < widths.size(); ++i) {
        font->widths_[static_cast<std::uint32_t>(first_char + static_cast<std::int64_t>(i))] =
            doc.resolve(widths[i]).as_number();
    }
    const double missing = doc.get(descriptor, "MissingWidth").as_number(0);
    if (missing > 0) font->default_width_ = missing;
    else if (std_font && std_font->mono) font->default_width_ = 600;
    return font;
}

std::string Font::unicode_for(std::uint32_t code) const {
    auto it = to_unicode_.find(code);
    if (it != to_unicode_.end()) return it->second;
    if (composite_) return "\xEF\xBF\xBD";
    if (code < simple_unicode_.size()) return simple_unicode_[code];
    return {};
}

double Font::width_for(std::uint32_t code) const {
    auto it = widths_.find(code);
    if (it != widths_.end() && it->second > 0) return it->second * width_scale_;
    if (!composite_ && std_metrics_ && code < glyph_names_.size()) {
        const int w = std_width(static_cast<const StdFont*>(std_metrics_), glyph_names_[code]);
        if (w >= 0) return w * 0.001;
    }
    if (it != widths_.end()) return it->second * width_scale_;
    return default_width_ * (composite_ ? 0.001 : width_scale_);
}

std::vector<Glyph> Font::decode(std::string_view bytes) const {
    std::vector<Glyph> out;
    if (!composite_) {
        out.reserve(bytes.size());
        for (unsigned char c : bytes) {
            Glyph g;
            g.code = c;
            g.text = unicode_for(c);
            g.advance = width_for(c);
            g.word_space = c == 32;
            out.push_back(std::move(g));
        }
        return out;
    }
    std::size_t i = 0;
    while (i < bytes.size()) {
        std::size_t len = 0;
        for (std::size_t n = 1; n <= 4 && i + n <= bytes.size() && len == 0; ++n) {
            for (const auto& [lo, hi] : codespace_) {
                if (lo.size() != n) continue;
                bool inside = true;
                for (std::size_t k = 0; k < n; ++k) {
                    const auto b = static_cast<unsigned char>(bytes[i + k]);
                    if (b < static_cast<unsigned char>(lo[k]) || b > static_cast<unsigned char>(hi[k])) {
                        inside = false;
                        break;
                    }
                }
                if (inside) {
                    len = n;
                    break;
                }
            }
        }
        if (len == 0) len = std::min<std::size_t>(2, bytes.size() - i);
        Glyph g;
        g.code = bytes_to_code(bytes.substr(i, len));
        g.text = unicode_for(g.code);
        g.advance = width_for(g.code);
        g.word_space = len == 1 && g.code == 32;
        out.push_back(std::move(g));
        i += len;
    }
    return out;
}

}  // namespace chunkwise::pdf
