#include "chunkwise/pdf/writer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "chunkwise/errors.hpp"
#include "filters.hpp"
#include "font.hpp"
#include "std_tables.hpp"

namespace chunkwise::pdf {

namespace {

struct FaceInfo {
    const char* resource;
    const char* base;
};

constexpr FaceInfo kFaces[] = {
    {"F1", "Helvetica"},   {"F2", "Helvetica-Bold"}, {"F3", "Helvetica-Oblique"}, {"F4", "Helvetica-BoldOblique"},
    {"F5", "Times-Roman"}, {"F6", "Times-Bold"},     {"F7", "Times-Italic"},      {"F8", "Courier"},
};

const tables::StdFont& metrics(Face face) {
    const char* base = kFaces[static_cast<int>(face)].base;
    for (std::size_t i = 0; i < tables::kStdFontCount; ++i) {
        if (std::string_view(tables::kStdFonts[i].name) == base) return tables::kStdFonts[i];
    }
    return tables::kStdFonts[0];
}

int glyph_width(const tables::StdFont& f, const char* glyph) {
    if (!glyph) return 0;
    for (std::size_t i = 0; i < f.width_count; ++i) {
        if (std::string_view(f.widths[i].name) == glyph) return f.widths[i].width;
    }
    return 0;
}

// Maps a code point to its WinAnsi byte; '?' when absent.
const std::map<std::uint32_t, unsigned char>& winansi_reverse() {
    static const std::map<std::uint32_t, unsigned char> table = [] {
        std::map<std::uint32_t, unsigned char> m;
        for (int c = 255; c >= 32; --c) {
            const char* name = tables::kWinAnsiEncoding[c];
            if (!name) continue;
            const std::string u = glyph_name_to_utf8(name);
            // decode the single code point back
            std::uint32_t cp = 0;
            const auto* s = reinterpret_cast<const unsigned char*>(u.data());
            if (u.size() == 1) cp = s[0];
            else if (u.size() == 2) cp = ((s[0] & 0x1F) << 6) | (s[1] & 0x3F);
            else if (u.size() == 3) cp = ((s[0] & 0x0F) << 12) | ((s[1] & 0x3F) << 6) | (s[2] & 0x3F);
            if (cp) m[cp] = static_cast<unsigned char>(c);
        }
        return m;
    }();
    return table;
}

std::string to_winansi(std::string_view utf8) {
    std::string out;
    const auto& rev = winansi_reverse();
    for (std::size_t i = 0; i < utf8.size();) {
        const auto c = static_cast<unsigned char>(utf8[i]);
        std::uint32_t cp;
        int len;
        if (c < 0x80) { cp = c; len = 1; }
        else if ((c >> 5) == 6 && i + 1 < utf8.size()) { cp = ((c & 0x1F) << 6) | (utf8[i + 1] & 0x3F); len = 2; }
        else if ((c >> 4) == 14 && i + 2 < utf8.size()) {
            cp = ((c & 0x0F) << 12) | ((utf8[i + 1] & 0x3F) << 6) | (utf8[i + 2] & 0x3F);
            len = 3;
        } else { cp = '?'; len = 1; }
        i += len;
        auto it = rev.find(cp);
        out += it == rev.end() ? '?' : static_cast<char>(it->second);
    }
    return out;
}

std::string escape_literal(std::string_view bytes) {
    std::string out = "(";
    for (char c : bytes) {
        if (c == '(' || c == ')' || c == '\\') out += '\\';
        out += c;
    }
    out += ')';
    return out;
}

std::string text_string(std::string_view utf8) {
    bool ascii = std::all_of(utf8.begin(), utf8.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
    if (ascii) return escape_literal(utf8);
    // UTF-16BE with BOM, hex encoded.
    std::string hex = "<FEFF";
    char buf[8];
    for (std::size_t i = 0; i < utf8.size();) {
        const auto c = static_cast<unsigned char>(utf8[i]);
        std::uint32_t cp;
        if (c < 0x80) { cp = c; i += 1; }
        else if ((c >> 5) == 6) { cp = ((c & 0x1F) << 6) | (utf8[i + 1] & 0x3F); i += 2; }
        else if ((c >> 4) == 14) { cp = ((c & 0x0F) << 12) | ((utf8[i + 1] & 0x3F) << 6) | (utf8[i + 2] & 0x3F); i += 3; }
        else { cp = ((c & 0x07) << 18) | ((utf8[i + 1] & 0x3F) << 12) | ((utf8[i + 2] & 0x3F) << 6) | (utf8[i + 3] & 0x3F); i += 4; }
        if (cp >= 0x10000) {
            cp -= 0x10000;
            std::snprintf(buf, sizeof buf, "%04X", 0xD800 + (cp >> 10));
            hex += buf;
            std::snprintf(buf, sizeof buf, "%04X", 0xDC00 + (cp & 0x3FF));
        } else {
            std::snprintf(buf, sizeof buf, "%04X", cp);
        }
        hex += buf;
    }
    return hex + ">";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

}  // namespace

int Writer::add_page(double width, double height) {
    PageData p;
    p.width = width;
    p.height = height;
    pages_.push_back(std::move(p));
    return static_cast<int>(pages_.size()) - 1;
}

void Writer::text(int page, double x, double baseline_y, std::string_view utf8, Face face, double size) {
    PageData& p = pages_.at(page);
    p.content += "BT /" + std::string(kFaces[static_cast<int>(face)].resource) + " " + fmt(size) + " Tf " + fmt(x) +
                 " " + fmt(p.height - baseline_y) + " Td " + escape_literal(to_winansi(utf8)) + " Tj ET\n";
}

void Writer::line(int page, Point a, Point b, double width) {
    PageData& p = pages_.at(page);
    p.content += fmt(width) + " w " + fmt(a.x) + " " + fmt(p.height - a.y) + " m " + fmt(b.x) + " " +
                 fmt(p.height - b.y) + " l S\n";
}

void Writer::filled_rect(int page, Rect r) {
    PageData& p = pages_.at(page);
    p.content += fmt(r.x0) + " " + fmt(p.height - r.y1) + " " + fmt(r.width()) + " " + fmt(r.height()) + " re f\n";
}

void Writer::link(int page, Rect rect, std::string uri) { pages_.at(page).links.emplace_back(rect, std::move(uri)); }

void Writer::outline(std::string title, int level, int page) { outline_.push_back({std::move(title), level, page}); }

double Writer::text_width(std::string_view utf8, Face face, double size) {
    const auto& m = metrics(face);
    double w = 0;
    for (unsigned char c : to_winansi(utf8)) w += glyph_width(m, tables::kWinAnsiEncoding[c]);
    return w * size / 1000.0;
}

std::string Writer::bytes() const {
    // Object numbering: 1 catalog, 2 page tree, 3..10 fonts, then pages,
    // contents, annotations and outline items.
    std::vector<std::string> objects(10);
    auto add = [&](std::string body) {
        objects.push_back(std::move(body));
        return static_cast<int>(objects.size());
    };
    auto ref = [](int n) { return std::to_string(n) + " 0 R"; };

    std::string font_res = "<<";
    for (int f = 0; f < 8; ++f) {
        const auto& m = metrics(static_cast<Face>(f));
        std::string widths = "[";
        for (int c = 32; c <= 255; ++c) {
            widths += std::to_string(glyph_width(m, tables::kWinAnsiEncoding[c]));
            widths += (c % 16 == 15) ? "\n" : " ";
        }
        widths += "]";
        objects[2 + f] = "<< /Type /Font /Subtype /Type1 /BaseFont /" + std::string(kFaces[f].base) +
                         " /Encoding /WinAnsiEncoding /FirstChar 32 /LastChar 255 /Widths " + widths + " >>";
        font_res += " /" + std::string(kFaces[f].resource) + " " + ref(3 + f);
    }
    font_res += " >>";

    std::vector<int> page_nums;
    std::vector<int> page_obj_slots;
    for (const auto& p : pages_) {
        std::string stream_dict;
        std::string data = p.content;
        if (compress_) {
            data = flate_encode(data);
            stream_dict = "<< /Length " + std::to_string(data.size()) + " /Filter /FlateDecode >>";
        } else {
            stream_dict = "<< /Length " + std::to_string(data.size()) + " >>";
        }
        const int content = add(stream_dict + "\nstream\n" + data + "\nendstream");
        std::string annots;
        for (const auto& [r, uri] : p.links) {
            const int a = add("<< /Type /Annot /Subtype /Link /Rect [" + fmt(r.x0) + " " + fmt(p.height - r.y1) + " " +
                              fmt(r.x1) + " " + fmt(p.height - r.y0) +
                              "] /Border [0 0 0] /A << /S /URI /URI " + escape_literal(uri) + " >> >>");
            annots += ref(a) + " ";
        }
        std::string page = "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + fmt(p.width) + " " + fmt(p.height) +
                           "] /Resources << /Font " + font_res + " >> /Contents " + ref(content);
        if (!annots.empty()) page += " /Annots [" + annots + "]";
        page += " >>";
        page_nums.push_back(add(page));
    }
    std::string kids;
    for (int n : page_nums) kids += ref(n) + " ";
    objects[1] = "<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(page_nums.size()) + " >>";

    std::string catalog = "<< /Type /Catalog /Pages 2 0 R";
    if (!outline_.empty()) {
        // Reserve numbers: root then one per item.
        const int root = add("");
        std::vector<int> nums;
        for (std::size_t i = 0; i < outline_.size(); ++i) nums.push_back(add(""));
        const int n = static_cast<int>(outline_.size());
        std::vector<int> parent(n, -1);
        std::vector<int> stack;
        for (int i = 0; i < n; ++i) {
            while (!stack.empty() && outline_[stack.back()].level >= outline_[i].level) stack.pop_back();
            parent[i] = stack.empty() ? -1 : stack.back();
            stack.push_back(i);
        }
        auto children = [&](int p) {
            std::vector<int> c;
            for (int i = 0; i < n; ++i)
                if (parent[i] == p) c.push_back(i);
            return c;
        };
        auto count_desc = [&](int p) {
            int c = 0;
            for (int i = 0; i < n; ++i) {
                int q = parent[i];
                while (q != -1 && q != p) q = parent[q];
                if (q == p) ++c;
            }
            return c;
        };
        for (int p = -1; p < n; ++p) {
            const auto kids_of = children(p);
            for (std::size_t k = 0; k < kids_of.size(); ++k) {
                const int i = kids_of[k];
                const auto& item = outline_[i];
                const int target = page_nums.at(item.page);
                std::string body = "<< /Title " + text_string(item.title) +
                                   " /Parent " + ref(p == -1 ? root : nums[p]) + " /Dest [" + ref(target) +
                                   " /XYZ 0 " + fmt(pages_[item.page].height) + " 0]";
                if (k > 0) body += " /Prev " + ref(nums[kids_of[k - 1]]);
                if (k + 1 < kids_of.size()) body += " /Next " + ref(nums[kids_of[k + 1]]);
                const auto grand = children(i);
                if (!grand.empty()) {
                    body += " /First " + ref(nums[grand.front()]) + " /Last " + ref(nums[grand.back()]) +
                            " /Count " + std::to_string(count_desc(i));
                }
                body += " >>";
                objects[nums[i] - 1] = body;
            }
        }
        const auto top = children(-1);
        objects[root - 1] = "<< /Type /Outlines /First " + ref(nums[top.front()]) + " /Last " +
                            ref(nums[top.back()]) + " /Count " + std::to_string(n) + " >>";
        catalog += " /Outlines " + ref(root);
    }
    catalog += " >>";
    objects[0] = catalog;

    std::string out = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        offsets.push_back(out.size());
        out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
    }
    const std::size_t xref = out.size();
    out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
    char buf[32];
    for (std::size_t off : offsets) {
        std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
        out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R >>\nstartxref\n" +
           std::to_string(xref) + "\n%%EOF\n";
    return out;
}

void Writer::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    const std::string data = bytes();
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace chunkwise::pdf
