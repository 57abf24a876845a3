#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "chunkwise/errors.hpp"
#include "chunkwise/raw_document.hpp"

namespace chunkwise {

using nlohmann::json;

namespace {

[[noreturn]] void invariant(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

void check_page(int page, int page_count, const std::string& where) {
    if (page < 0 || page >= page_count) {
        invariant(where + ": page_index " + std::to_string(page) + " not < page_count " +
                  std::to_string(page_count));
    }
}

void check_rect(const Rect& r, const std::string& where) {
    if (!(r.x0 <= r.x1)) invariant(where + ": x0 ≤ x1");
    if (!(r.y0 <= r.y1)) invariant(where + ": y0 ≤ y1");
}

// --- reading ---------------------------------------------------------------

[[noreturn]] void schema(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(path + "." + key, "missing field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema(path, "expected number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema(path, "expected integer");
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema(path, "expected string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) schema(path, "expected boolean");
    return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path, std::size_t exact_size = 0) {
    if (!j.is_array()) schema(path, "expected array");
    if (exact_size != 0 && j.size() != exact_size) {
        schema(path, "expected " + std::to_string(exact_size) + " elements");
    }
    return j;
}

Rect as_rect(const json& j, const std::string& path) {
    as_array(j, path, 4);
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"), as_number(j[2], path + "[2]"),
            as_number(j[3], path + "[3]")};
}

Point as_point(const json& j, const std::string& path) {
    as_array(j, path, 2);
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

// --- writing ---------------------------------------------------------------

double q3(double v) {
    const double r = std::round(v * 1000.0) / 1000.0;
    return r == 0.0 ? 0.0 : r;
}

void write_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += json(k).dump();
                out += ':';
                write_canonical(v, out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write_canonical(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f", q3(j.get<double>()));
            out += buf;
            break;
        }
        default:
            out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    }
}

json rect_json(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

}  // namespace

void sort_spans(std::vector<Span>& spans) {
    std::stable_sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        if (a.page != b.page) return a.page < b.page;
        if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
        return a.bbox.x0 < b.bbox.x0;
    });
}

void validate(const RawDocument& doc) {
    if (doc.page_count < 0) invariant("page_count must be non-negative");
    if (static_cast<int>(doc.page_sizes.size()) != doc.page_count) {
        invariant("page_sizes has " + std::to_string(doc.page_sizes.size()) + " entries for page_count " +
                  std::to_string(doc.page_count));
    }
    for (std::size_t i = 0; i < doc.spans.size(); ++i) {
        const Span& s = doc.spans[i];
        const std::string where = "spans[" + std::to_string(i) + "]";
        check_page(s.page, doc.page_count, where);
        check_rect(s.bbox, where);
        if (!(s.font_size > 0.0)) invariant(where + ": font_size > 0");
        if (s.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos) invariant(where + ": text non-empty");
    }
    for (std::size_t i = 0; i < doc.segments.size(); ++i) {
        check_page(doc.segments[i].page, doc.page_count, "segments[" + std::to_string(i) + "]");
    }
    for (std::size_t i = 0; i < doc.links.size(); ++i) {
        const std::string where = "links[" + std::to_string(i) + "]";
        check_page(doc.links[i].page, doc.page_count, where);
        check_rect(doc.links[i].bbox, where);
        if (doc.links[i].uri.empty()) invariant(where + ": uri non-empty");
    }
    if (doc.toc) {
        for (std::size_t i = 0; i < doc.toc->size(); ++i) {
            const TocEntry& e = (*doc.toc)[i];
            const std::string where = "toc[" + std::to_string(i) + "]";
            check_page(e.page, doc.page_count, where);
            if (e.level < 1) invariant(where + ": level ≥ 1");
        }
    }
}

RawDocument parse_fixture(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("$: not valid JSON: ") + e.what());
    }
    RawDocument doc;
    doc.page_count = as_int(field(root, "page_count", "$"), "$.page_count");

    const json& sizes = as_array(field(root, "page_sizes", "$"), "$.page_sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const Point p = as_point(sizes[i], "$.page_sizes[" + std::to_string(i) + "]");
        doc.page_sizes.push_back({p.x, p.y});
    }

    const json& spans = as_array(field(root, "spans", "$"), "$.spans");
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const std::string p = "$.spans[" + std::to_string(i) + "]";
        const json& j = spans[i];
        Span s;
        s.page = as_int(field(j, "page", p), p + ".page");
        s.bbox = as_rect(field(j, "bbox", p), p + ".bbox");
        s.text = as_string(field(j, "text", p), p + ".text");
        s.font_size = as_number(field(j, "font_size", p), p + ".font_size");
        s.font_name = as_string(field(j, "font_name", p), p + ".font_name");
        s.bold = as_bool(field(j, "bold", p), p + ".bold");
        s.italic = as_bool(field(j, "italic", p), p + ".italic");
        s.mono = as_bool(field(j, "mono", p), p + ".mono");
        if (j.contains("rotated")) s.rotated = as_bool(j["rotated"], p + ".rotated");
        if (j.contains("uri")) s.uri = as_string(j["uri"], p + ".uri");
        doc.spans.push_back(std::move(s));
    }

    const json& segs = as_array(field(root, "segments", "$"), "$.segments");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string p = "$.segments[" + std::to_string(i) + "]";
        DrawSegment s;
        s.page = as_int(field(segs[i], "page", p), p + ".page");
        s.p0 = as_point(field(segs[i], "p0", p), p + ".p0");
        s.p1 = as_point(field(segs[i], "p1", p), p + ".p1");
        s.width = as_number(field(segs[i], "width", p), p + ".width");
        doc.segments.push_back(s);
    }

    const json& links = as_array(field(root, "links", "$"), "$.links");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string p = "$.links[" + std::to_string(i) + "]";
        LinkBox l;
        l.page = as_int(field(links[i], "page", p), p + ".page");
        l.bbox = as_rect(field(links[i], "bbox", p), p + ".bbox");
        l.uri = as_string(field(links[i], "uri", p), p + ".uri");
        doc.links.push_back(std::move(l));
    }

    const json& toc = field(root, "toc", "$");
    if (!toc.is_null()) {
        as_array(toc, "$.toc");
        std::vector<TocEntry> entries;
        for (std::size_t i = 0; i < toc.size(); ++i) {
            const std::string p = "$.toc[" + std::to_string(i) + "]";
            TocEntry e;
            e.title = as_string(field(toc[i], "title", p), p + ".title");
            e.level = as_int(field(toc[i], "level", p), p + ".level");
            e.page = as_int(field(toc[i], "page", p), p + ".page");
            entries.push_back(std::move(e));
        }
        doc.toc = std::move(entries);
    }

    validate(doc);
    return doc;
}

RawDocument load_fixture(const std::filesystem::path& json_path) {
    std::ifstream in(json_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, json_path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fixture(ss.str());
}

std::string to_fixture_json(const RawDocument& doc) {
    validate(doc);
    json root = json::object();
    root["page_count"] = doc.page_count;
    json sizes = json::array();
    for (const auto& s : doc.page_sizes) sizes.push_back(json::array({s.width, s.height}));
    root["page_sizes"] = std::move(sizes);

    json spans = json::array();
    for (const auto& s : doc.spans) {
        json j = {{"page", s.page},          {"bbox", rect_json(s.bbox)},   {"text", s.text},
                  {"font_size", s.font_size}, {"font_name", s.font_name},     {"bold", s.bold},
                  {"italic", s.italic},       {"mono", s.mono}};
        if (s.rotated) j["rotated"] = true;
        if (!s.uri.empty()) j["uri"] = s.uri;
        spans.push_back(std::move(j));
    }
    root["spans"] = std::move(spans);

    json segs = json::array();
    for (const auto& s : doc.segments) {
        segs.push_back({{"page", s.page},
                        {"p0", json::array({s.p0.x, s.p0.y})},
                        {"p1", json::array({s.p1.x, s.p1.y})},
                        {"width", s.width}});
    }
    root["segments"] = std::move(segs);

    json links = json::array();
    for (const auto& l : doc.links) links.push_back({{"page", l.page}, {"bbox", rect_json(l.bbox)}, {"uri", l.uri}});
    root["links"] = std::move(links);

    if (doc.toc) {
        json toc = json::array();
        for (const auto& e : *doc.toc) toc.push_back({{"title", e.title}, {"level", e.level}, {"page", e.page}});
        root["toc"] = std::move(toc);
    } else {
        root["toc"] = nullptr;
    }

    std::string out;
    write_canonical(root, out);
    out += '\n';
    return out;
}

void dump_fixture(const RawDocument& doc, const std::filesystem::path& json_path) {
    const std::string text = to_fixture_json(doc);
    std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + json_path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + json_path.string());
}

}  // namespace chunkwise
