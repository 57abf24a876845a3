#include "chunkwise/pdf/document.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "chunkwise/errors.hpp"
#include "filters.hpp"
#include "lexer.hpp"

namespace chunkwise::pdf {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedPdf, what); }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Offset of the data after the "stream" keyword's end-of-line.
std::size_t skip_stream_eol(std::string_view data, std::size_t pos) {
    while (pos < data.size() && (data[pos] == ' ' || data[pos] == '\t')) ++pos;
    if (pos < data.size() && data[pos] == '\r') ++pos;
    if (pos < data.size() && data[pos] == '\n') ++pos;
    return pos;
}

}  // namespace

Document Document::open(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw Error(ErrorCode::FileNotFound, path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_bytes(std::move(ss).str());
}

Document Document::from_bytes(std::string bytes) {
    Document doc;
    doc.data_ = std::make_shared<const std::string>(std::move(bytes));
    doc.load();
    return doc;
}

void Document::load() {
    const std::string& data = *data_;
    const std::size_t header = data.find("%PDF-");
    if (header == std::string::npos || header > 1024) malformed("missing %PDF header");

    bool ok = false;
    const std::size_t sx = data.rfind("startxref");
    if (sx != std::string::npos) {
        Lexer lex(data, sx + 9);
        Token t = lex.next();
        if (t.kind == TokenKind::Integer && t.integer >= 0 && static_cast<std::size_t>(t.integer) < data.size()) {
            try {
                ok = read_xref_chain(static_cast<std::size_t>(t.integer));
            } catch (const Error&) {
                ok = false;
            }
        }
    }
    if (!ok || trailer_.get("Root").is_null()) reconstruct();
    if (!trailer_.get("Encrypt").is_null()) throw Error(ErrorCode::EncryptedPdf, "document is encrypted");
    build_page_tree();
}

bool Document::read_xref_chain(std::size_t offset) {
    std::set<std::size_t> seen;
    bool first = true;
    while (true) {
        if (!seen.insert(offset).second) break;
        Object section_trailer;
        Lexer lex(*data_, offset);
        Token t = lex.peek();
        bool ok;
        if (t.is_keyword("xref")) {
            ok = read_xref_table(offset, section_trailer);
        } else {
            ok = read_xref_stream(offset, section_trailer);
        }
        if (!ok) return false;
        if (first) {
            trailer_ = section_trailer;
            first = false;
        }
        // Hybrid files keep part of the table in an xref stream.
        const Object& xrefstm = section_trailer.get("XRefStm");
        if (xrefstm.is_int()) {
            Object ignored;
            read_xref_stream(static_cast<std::size_t>(xrefstm.as_int()), ignored);
        }
        const Object& prev = section_trailer.get("Prev");
        if (!prev.is_int()) break;
        const auto p = prev.as_int();
        if (p < 0 || static_cast<std::size_t>(p) >= data_->size()) break;
        offset = static_cast<std::size_t>(p);
    }
    return !xref_.empty();
}

bool Document::read_xref_table(std::size_t offset, Object& trailer_out) {
    Lexer lex(*data_, offset);
    if (!lex.next().is_keyword("xref")) return false;
    for (;;) {
        Token t = lex.next();
        if (t.is_keyword("trailer")) break;
        if (t.kind != TokenKind::Integer) return false;
        Token count = lex.next();
        if (count.kind != TokenKind::Integer) return false;
        for (std::int64_t i = 0; i < count.integer; ++i) {
            Token off = lex.next();
            Token gen = lex.next();
            Token kind = lex.next();
            if (off.kind != TokenKind::Integer || gen.kind != TokenKind::Integer || kind.kind != TokenKind::Keyword) {
                return false;
            }
            const int num = static_cast<int>(t.integer + i);
            if (kind.text == "n" && !xref_.count(num)) {
                xref_[num] = XrefEntry{1, static_cast<std::size_t>(off.integer), 0, 0};
            } else if (kind.text == "f" && !xref_.count(num)) {
                xref_[num] = XrefEntry{0, 0, 0, 0};
            }
        }
    }
    trailer_out = parse_object(lex);
    return trailer_out.is_dict();
}

bool Document::read_xref_stream(std::size_t offset, Object& trailer_out) {
    bool ok = false;
    Object obj = load_at_offset(offset, -1, ok);
    if (!ok || !obj.is_stream() || !obj.get("Type").is_name("XRef")) return false;
    trailer_out = Object(obj.as_dict());
    const std::string data = stream_data(obj);
    const Array& w = obj.get("W").as_array();
    if (w.size() < 3) return false;
    const int w0 = static_cast<int>(w[0].as_int()), w1 = static_cast<int>(w[1].as_int()),
              w2 = static_cast<int>(w[2].as_int());
    const int row = w0 + w1 + w2;
    if (row <= 0) return false;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    const Array& index = obj.get("Index").as_array();
    if (index.size() >= 2) {
        for (std::size_t i = 0; i + 1 < index.size(); i += 2) ranges.emplace_back(index[i].as_int(), index[i + 1].as_int());
    } else {
        ranges.emplace_back(0, obj.get("Size").as_int());
    }
    auto field = [&](std::size_t pos, int width) -> std::uint64_t {
        std::uint64_t v = 0;
        for (int k = 0; k < width; ++k) v = (v << 8) | static_cast<unsigned char>(data[pos + k]);
        return v;
    };
    std::size_t pos = 0;
    for (auto [start, count] : ranges) {
        for (std::int64_t i = 0; i < count; ++i) {
            if (pos + row > data.size()) return true;
            const std::uint64_t type = w0 == 0 ? 1 : field(pos, w0);
            const std::uint64_t f1 = field(pos + w0, w1);
            const std::uint64_t f2 = field(pos + w0 + w1, w2);
            pos += row;
            const int num = static_cast<int>(start + i);
            if (xref_.count(num)) continue;
            if (type == 1) {
                xref_[num] = XrefEntry{1, static_cast<std::size_t>(f1), 0, 0};
            } else if (type == 2) {
                xref_[num] = XrefEntry{2, 0, static_cast<int>(f1), static_cast<int>(f2)};
            } else if (type == 0) {
                xref_[num] = XrefEntry{0, 0, 0, 0};
            }
        }
    }
    return true;
}

void Document::reconstruct() {
    repaired_ = true;
    xref_.clear();
    cache_.clear();
    const std::string& data = *data_;
    std::size_t p = 0;
    while ((p = data.find("obj", p)) != std::string::npos) {
        const std::size_t kw = p;
        p += 3;
        if (kw == 0 || !is_pdf_whitespace(data[kw - 1])) continue;
        if (kw + 3 < data.size() && !is_pdf_whitespace(data[kw + 3]) && !is_pdf_delimiter(data[kw + 3])) continue;
        std::size_t q = kw;
        while (q > 0 && is_pdf_whitespace(data[q - 1])) --q;
        std::size_t gen_end = q;
        while (q > 0 && is_digit(data[q - 1])) --q;
        if (q == gen_end) continue;
        std::size_t mid = q;
        while (q > 0 && is_pdf_whitespace(data[q - 1])) --q;
        if (q == mid) continue;
        std::size_t num_end = q;
        while (q > 0 && is_digit(data[q - 1])) --q;
        if (q == num_end) continue;
        const int num = std::atoi(data.substr(q, num_end - q).c_str());
        xref_[num] = XrefEntry{1, q, 0, 0};
    }
    if (xref_.empty()) malformed("no objects found");

    // Objects packed into object streams.
    std::map<int, XrefEntry> packed;
    Object best_trailer;
    for (const auto& [num, entry] : xref_) {
        bool ok = false;
        Object obj = load_at_offset(entry.offset, num, ok);
        if (!ok) continue;
        if (obj.is_stream() && obj.get("Type").is_name("ObjStm")) {
            const std::string content = stream_data(obj);
            Lexer lex(content);
            const auto n = obj.get("N").as_int();
            for (std::int64_t i = 0; i < n; ++i) {
                Token a = lex.next();
                Token b = lex.next();
                if (a.kind != TokenKind::Integer || b.kind != TokenKind::Integer) break;
                packed[static_cast<int>(a.integer)] = XrefEntry{2, 0, num, static_cast<int>(i)};
            }
        }
        if (obj.is_stream() && obj.get("Type").is_name("XRef") && !obj.get("Root").is_null()) {
            best_trailer = Object(obj.as_dict());
        }
    }
    for (const auto& [num, entry] : packed) xref_.try_emplace(num, entry);
    cache_.clear();

    const std::size_t tr = data.rfind("trailer");
    if (tr != std::string::npos) {
        Lexer lex(data, tr + 7);
        try {
            Object t = parse_object(lex);
            if (t.is_dict() && !t.get("Root").is_null()) best_trailer = t;
        } catch (const Error&) {
        }
    }
    if (best_trailer.get("Root").is_null()) {
        for (const auto& [num, entry] : xref_) {
            Object obj = object(Ref{num, 0});
            if (obj.is_dict() && obj.get("Type").is_name("Catalog")) {
                Dict d;
                d["Root"] = Object(Ref{num, 0});
                best_trailer = Object(std::move(d));
                break;
            }
        }
    }
    if (best_trailer.get("Root").is_null()) malformed("no document catalog");
    trailer_ = best_trailer;
}

Object Document::load_at_offset(std::size_t offset, int expected_num, bool& ok) const {
    ok = false;
    const std::string& data = *data_;
    if (offset >= data.size()) return {};
    Lexer lex(data, offset);
    Token num = lex.next();
    Token gen = lex.next();
    Token kw = lex.next();
    if (num.kind != TokenKind::Integer || gen.kind != TokenKind::Integer || !kw.is_keyword("obj")) return {};
    if (expected_num >= 0 && num.integer != expected_num) return {};
    Object obj;
    try {
        obj = parse_object(lex);
    } catch (const Error&) {
        return {};
    }
    const std::size_t after_obj = lex.pos();
    Token next = lex.next();
    if (next.is_keyword("stream") && obj.is_dict()) {
        const std::size_t start = skip_stream_eol(data, lex.pos());
        std::size_t length = std::string::npos;
        const Object& len_obj = obj.get("Length");
        if (len_obj.is_int()) {
            length = static_cast<std::size_t>(std::max<std::int64_t>(0, len_obj.as_int()));
        } else if (len_obj.is_ref()) {
            if (resolve_depth_ < 8) {
                ++resolve_depth_;
                Object l = object(len_obj.as_ref());
                --resolve_depth_;
                if (l.is_int()) length = static_cast<std::size_t>(std::max<std::int64_t>(0, l.as_int()));
            }
        }
        bool length_ok = false;
        if (length != std::string::npos && start + length <= data.size()) {
            Lexer check(data, start + length);
            length_ok = check.next().is_keyword("endstream");
        }
        if (!length_ok) {
            const std::size_t end = data.find("endstream", start);
            std::size_t stop = end == std::string::npos ? data.size() : end;
            if (stop > start && data[stop - 1] == '\n') --stop;
            if (stop > start && data[stop - 1] == '\r') --stop;
            length = stop - start;
        }
        Stream s;
        s.dict = obj.as_dict();
        s.data = data.substr(start, length);
        ok = true;
        return Object(std::move(s));
    }
    (void)after_obj;
    ok = true;
    return obj;
}

Object Document::load_from_object_stream(int container, int index, int num) const {
    auto it = objstm_data_.find(container);
    if (it == objstm_data_.end()) {
        Object stm = object(Ref{container, 0});
        if (!stm.is_stream()) return {};
        auto content = std::make_shared<const std::string>(stream_data(stm));
        const auto n = stm.get("N").as_int();
        const auto first = static_cast<std::size_t>(stm.get("First").as_int());
        Lexer lex(*content);
        std::map<int, std::size_t> offsets;
        for (std::int64_t i = 0; i < n; ++i) {
            Token a = lex.next();
            Token b = lex.next();
            if (a.kind != TokenKind::Integer || b.kind != TokenKind::Integer) break;
            offsets[static_cast<int>(a.integer)] = first + static_cast<std::size_t>(b.integer);
        }
        objstm_offsets_[container] = std::move(offsets);
        it = objstm_data_.emplace(container, std::move(content)).first;
    }
    const auto& offsets = objstm_offsets_[container];
    auto off = offsets.find(num);
    if (off == offsets.end() || off->second >= it->second->size()) return {};
    (void)index;
    Lexer lex(*it->second, off->second);
    try {
        return parse_object(lex);
    } catch (const Error&) {
        return {};
    }
}

Object Document::object(Ref ref) const {
    auto cached = cache_.find(ref.num);
    if (cached != cache_.end()) return cached->second;
    auto it = xref_.find(ref.num);
    if (it == xref_.end() || it->second.type == 0) return {};
    if (resolve_depth_ > 32) return {};
    ++resolve_depth_;
    Object result;
    if (it->second.type == 1) {
        bool ok = false;
        result = load_at_offset(it->second.offset, ref.num, ok);
        if (!ok) {
            // Off-by-a-few offsets are common; search the neighbourhood.
            const std::string& data = *data_;
            const std::string needle = std::to_string(ref.num) + " " + std::to_string(ref.gen) + " obj";
            std::size_t pos = data.find(needle, it->second.offset > 64 ? it->second.offset - 64 : 0);
            if (pos == std::string::npos) pos = data.find(needle);
            if (pos != std::string::npos) result = load_at_offset(pos, ref.num, ok);
        }
    } else {
        result = load_from_object_stream(it->second.container, it->second.index, ref.num);
    }
    --resolve_depth_;
    cache_[ref.num] = result;
    return result;
}

Object Document::resolve(const Object& obj) const {
    Object cur = obj;
    for (int i = 0; i < 16 && cur.is_ref(); ++i) cur = object(cur.as_ref());
    return cur.is_ref() ? Object() : cur;
}

std::string Document::stream_data(const Object& stream) const {
    if (!stream.is_stream()) return {};
    const Stream& s = stream.as_stream();
    Object filter = resolve(stream.get("Filter"));
    if (filter.is_null()) return s.data;
    Object parms = resolve(stream.get("DecodeParms"));
    if (filter.is_array()) {
        Array resolved;
        for (const auto& f : filter.as_array()) resolved.push_back(resolve(f));
        filter = Object(std::move(resolved));
    }
    return decode_filters(s.data, filter, parms);
}

std::optional<int> Document::page_index(Ref ref) const {
    auto it = page_index_.find(ref);
    if (it == page_index_.end()) return std::nullopt;
    return it->second;
}

void Document::build_page_tree() {
    Object root = catalog();
    if (!root.is_dict()) malformed("catalog is not a dictionary");
    std::set<int> visited;

    struct Inherited {
        Object resources;
        Object media_box;
    };

    auto rect_from = [&](const Object& box) -> std::optional<Rect> {
        Object b = resolve(box);
        const Array& a = b.as_array();
        if (a.size() != 4) return std::nullopt;
        double v[4];
        for (int i = 0; i < 4; ++i) v[i] = resolve(a[i]).as_number();
        return Rect{std::min(v[0], v[2]), std::min(v[1], v[3]), std::max(v[0], v[2]), std::max(v[1], v[3])};
    };

    std::function<void(const Object&, Inherited, int)> walk = [&](const Object& node_ref, Inherited inh, int depth) {
        if (depth > 64) return;
        if (node_ref.is_ref() && !visited.insert(node_ref.as_ref().num).second) return;
        Object node = resolve(node_ref);
        if (!node.is_dict()) return;
        if (!node.get("Resources").is_null()) inh.resources = resolve(node.get("Resources"));
        if (!node.get("MediaBox").is_null()) inh.media_box = node.get("MediaBox");
        const Object& kids = node.get("Kids");
        const Object& type = node.get("Type");
        if (type.is_name("Pages") || (!type.is_name("Page") && !kids.is_null())) {
            for (const auto& kid : resolve(kids).as_array()) walk(kid, inh, depth + 1);
            return;
        }
        Page page;
        page.dict = node;
        page.resources = inh.resources;
        page.ref = node_ref.is_ref() ? node_ref.as_ref() : Ref{-1, 0};
        if (auto r = rect_from(inh.media_box)) page.media_box = *r;
        if (auto crop = rect_from(node.get("CropBox"))) {
            // Clip to the visible area when a crop box is present.
            Rect c = *crop;
            const Rect m = page.media_box;
            Rect clipped{std::max(c.x0, m.x0), std::max(c.y0, m.y0), std::min(c.x1, m.x1), std::min(c.y1, m.y1)};
            if (clipped.well_formed() && clipped.area() > 0) page.media_box = clipped;
        }
        if (page.ref.num >= 0) page_index_[page.ref] = static_cast<int>(pages_.size());
        pages_.push_back(std::move(page));
    };
    walk(root.get("Pages"), Inherited{}, 0);
}

Object Document::name_tree_lookup(const Object& root_obj, const std::string& key) const {
    std::set<int> visited;
    Object node = resolve(root_obj);
    for (int depth = 0; depth < 32 && node.is_dict(); ++depth) {
        const Array& names = resolve(node.get("Names")).as_array();
        for (std::size_t i = 0; i + 1 < names.size(); i += 2) {
            if (resolve(names[i]).as_string() == key) return resolve(names[i + 1]);
        }
        const Array& kids = resolve(node.get("Kids")).as_array();
        Object next;
        for (const auto& kid_ref : kids) {
            if (kid_ref.is_ref() && visited.count(kid_ref.as_ref().num)) continue;
            Object kid = resolve(kid_ref);
            const Array& limits = resolve(kid.get("Limits")).as_array();
            if (limits.size() == 2) {
                const std::string& lo = resolve(limits[0]).as_string();
                const std::string& hi = resolve(limits[1]).as_string();
                if (key < lo || key > hi) continue;
            }
            if (kid_ref.is_ref()) visited.insert(kid_ref.as_ref().num);
            next = kid;
            break;
        }
        if (next.is_null()) return {};
        node = next;
    }
    return {};
}

}  // namespace chunkwise::pdf
