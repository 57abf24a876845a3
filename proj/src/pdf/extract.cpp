#include "chunkwise/pdf/extract.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <set>

#include "chunkwise/errors.hpp"
#include "chunkwise/pdf/document.hpp"
#include "content.hpp"
#include "font.hpp"

namespace chunkwise {

namespace {

using pdf::Document;
using pdf::Object;
using pdf::PlacedGlyph;

bool is_space_text(const std::string& t) {
    for (unsigned char c : t) {
        if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == 0xA0)) {
            // Non-breaking space arrives as the two-byte sequence C2 A0.
            if (c == 0xC2) continue;
            return false;
        }
    }
    return true;
}

bool is_control_text(const std::string& t) {
    return t.size() == 1 && static_cast<unsigned char>(t[0]) < 0x20;
}

std::string collapse_whitespace(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const unsigned char c = s[i];
        const bool nbsp = c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0;
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || nbsp) {
            pending_space = true;
            if (nbsp) ++i;
            continue;
        }
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += static_cast<char>(c);
    }
    return out;
}

struct SpanBuilder {
    Span span;
    std::string raw;
    const pdf::Font* font = nullptr;
    double baseline = 0;
    double right = 0;
    bool has_ink = false;
    bool open = false;
};

void flush(SpanBuilder& b, std::vector<Span>& out) {
    if (b.open && b.has_ink) {
        b.span.text = collapse_whitespace(b.raw);
        if (!b.span.text.empty()) out.push_back(b.span);
    }
    b = SpanBuilder{};
}

Rect glyph_box(const PlacedGlyph& g) {
    const double asc = g.font->ascent() * g.size;
    const double desc = -g.font->descent() * g.size;
    if (!g.rotated) {
        return {std::min(g.origin.x, g.end.x), g.origin.y - asc, std::max(g.origin.x, g.end.x), g.origin.y + desc};
    }
    // Rotated glyph: box around the baseline segment, extended by the em height.
    const double dx = g.end.x - g.origin.x, dy = g.end.y - g.origin.y;
    const double len = std::hypot(dx, dy);
    const double nx = len > 0 ? -dy / len : 0, ny = len > 0 ? dx / len : -1;
    const Point pts[4] = {{g.origin.x - nx * asc, g.origin.y - ny * asc}, {g.end.x - nx * asc, g.end.y - ny * asc},
                          {g.origin.x + nx * desc, g.origin.y + ny * desc}, {g.end.x + nx * desc, g.end.y + ny * desc}};
    Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) r = r.unite({p.x, p.y, p.x, p.y});
    return r;
}

// Groups glyphs in content order into spans of uniform font, size and baseline.
std::vector<Span> build_spans(const std::vector<PlacedGlyph>& glyphs, int page) {
    std::vector<Span> out;
    SpanBuilder cur;
    for (const auto& g : glyphs) {
        if (is_control_text(g.text)) continue;
        const bool space = is_space_text(g.text);
        const Rect box = glyph_box(g);
        bool same = cur.open && cur.font == g.font.get() && std::abs(cur.span.font_size - g.size) < 0.01 &&
                    cur.span.rotated == g.rotated;
        double gap = 0;
        if (same && !g.rotated) {
            gap = std::min(g.origin.x, g.end.x) - cur.right;
            same = std::abs(g.origin.y - cur.baseline) <= 0.1 * g.size && gap > -0.5 * g.size && gap < 1.0 * g.size;
        }
        if (!same) {
            flush(cur, out);
            if (space) continue;
            cur.open = true;
            cur.font = g.font.get();
            cur.baseline = g.origin.y;
            cur.span.page = page;
            cur.span.font_size = std::round(g.size * 1000.0) / 1000.0;
            cur.span.font_name = g.font->name();
            cur.span.bold = g.font->bold();
            cur.span.italic = g.font->italic();
            cur.span.mono = g.font->mono();
            cur.span.rotated = g.rotated;
            cur.span.bbox = box;
            cur.right = std::max(g.origin.x, g.end.x);
        } else if (!g.rotated && gap > 0.15 * g.size && !cur.raw.empty() && cur.raw.back() != ' ' && !space) {
            cur.raw += ' ';
        }
        cur.raw += g.text;
        if (!space) {
            cur.span.bbox = cur.has_ink ? cur.span.bbox.unite(box) : box;
            cur.has_ink = true;
        }
        cur.right = std::max(cur.right, std::max(g.origin.x, g.end.x));
    }
    flush(cur, out);
    return out;
}

Rect page_rect(const Document& doc, const pdf::Page& page, const Object& rect_obj) {
    const pdf::Array& a = doc.resolve(rect_obj).as_array();
    if (a.size() != 4) return {};
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = doc.resolve(a[i]).as_number();
    const Rect mb = page.media_box;
    const double x0 = std::min(v[0], v[2]) - mb.x0, x1 = std::max(v[0], v[2]) - mb.x0;
    const double y0 = mb.y1 - std::max(v[1], v[3]), y1 = mb.y1 - std::min(v[1], v[3]);
    return {x0, y0, x1, y1};
}

void extract_links(const Document& doc, const pdf::Page& page, int index, std::vector<LinkBox>& out) {
    for (const auto& annot_ref : doc.get(page.dict, "Annots").as_array()) {
        const Object annot = doc.resolve(annot_ref);
        if (!doc.get(annot, "Subtype").is_name("Link")) continue;
        const Object action = doc.get(annot, "A");
        if (!doc.get(action, "S").is_name("URI")) continue;
        const std::string uri = pdf::pdf_text_string_to_utf8(doc.get(action, "URI").as_string());
        if (uri.empty()) continue;
        Rect r = page_rect(doc, page, annot.get("Rect"));
        if (!r.well_formed()) continue;
        out.push_back({index, r, uri});
    }
}

std::optional<int> destination_page(const Document& doc, const Object& dest_in) {
    Object dest = doc.resolve(dest_in);
    if (dest.is_name() || dest.is_string()) {
        const std::string key = dest.is_name() ? dest.as_name() : dest.as_string();
        const Object catalog = doc.catalog();
        Object found = doc.get(doc.get(catalog, "Dests"), key);
        if (found.is_null()) found = doc.name_tree_lookup(doc.get(doc.get(catalog, "Names"), "Dests"), key);
        dest = doc.resolve(found);
    }
    if (dest.is_dict()) dest = doc.get(dest, "D");
    const pdf::Array& arr = dest.as_array();
    if (arr.empty()) return std::nullopt;
    if (arr[0].is_ref()) return doc.page_index(arr[0].as_ref());
    if (arr[0].is_int()) {
        const auto i = arr[0].as_int();
        if (i >= 0 && i < static_cast<std::int64_t>(doc.pages().size())) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::optional<std::vector<TocEntry>> extract_outline(const Document& doc) {
    const Object outlines = doc.get(doc.catalog(), "Outlines");
    if (!outlines.is_dict()) return std::nullopt;
    std::vector<TocEntry> entries;
    std::set<int> visited;
    std::function<void(const Object&, int)> walk = [&](const Object& first, int level) {
        Object item_ref = first;
        while (item_ref.is_ref() && entries.size() < 100000) {
            if (!visited.insert(item_ref.as_ref().num).second) return;
            const Object item = doc.resolve(item_ref);
            if (!item.is_dict()) return;
            const std::string title = pdf::pdf_text_string_to_utf8(doc.get(item, "Title").as_string());
            std::optional<int> page;
            if (!item.get("Dest").is_null()) {
                page = destination_page(doc, item.get("Dest"));
            } else {
                const Object action = doc.get(item, "A");
                if (doc.get(action, "S").is_name("GoTo")) page = destination_page(doc, action.get("D"));
            }
            std::string trimmed = title;
            while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.pop_back();
            if (page && !trimmed.empty()) entries.push_back({trimmed, level, *page});
            if (level < 64) walk(item.get("First"), level + 1);
            item_ref = item.get("Next");
        }
    };
    walk(outlines.get("First"), 1);
    if (entries.empty()) return std::nullopt;
    return entries;
}

RawDocument extract(const Document& doc) {
    RawDocument raw;
    raw.page_count = static_cast<int>(doc.pages().size());
    pdf::FontCache fonts;
    for (int i = 0; i < raw.page_count; ++i) {
        const pdf::Page& page = doc.pages()[i];
        raw.page_sizes.push_back({page.media_box.width(), page.media_box.height()});
        pdf::ContentInterpreter interp(doc, page, fonts);
        interp.run();
        auto spans = build_spans(interp.glyphs(), i);
        raw.spans.insert(raw.spans.end(), std::make_move_iterator(spans.begin()), std::make_move_iterator(spans.end()));
        for (const auto& s : interp.segments()) raw.segments.push_back({i, s.p0, s.p1, s.width});
        extract_links(doc, page, i, raw.links);
    }
    sort_spans(raw.spans);
    raw.toc = extract_outline(doc);
    return raw;
}

}  // namespace

RawDocument extract_raw(const std::filesystem::path& pdf_path) { return extract(Document::open(pdf_path)); }

RawDocument extract_raw_from_bytes(std::string pdf_bytes) { return extract(Document::from_bytes(std::move(pdf_bytes))); }

}  // namespace chunkwise
