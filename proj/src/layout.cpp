#include "chunkwise/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "chunkwise/errors.hpp"

namespace chunkwise {

namespace {

double bucket(double v) { return std::round(v * 2.0) / 2.0; }

Rect unite_all(const std::vector<Span>& spans) {
    Rect r = spans.front().bbox;
    for (const auto& s : spans) r = r.unite(s.bbox);
    return r;
}

Line make_line(std::vector<Span> spans) {
    std::stable_sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.bbox.x0 < b.bbox.x0; });
    Line l;
    l.page = spans.front().page;
    l.bbox = unite_all(spans);
    l.spans = std::move(spans);
    return l;
}

Block make_block(std::vector<Line> lines) {
    Block b;
    b.page = lines.front().page;
    b.bbox = lines.front().bbox;
    for (const auto& l : lines) b.bbox = b.bbox.unite(l.bbox);
    b.lines = std::move(lines);
    return b;
}

template <typename Map>
double weighted_mode(const Map& counts) {
    double best = 0;
    double best_weight = -1;
    // Ascending keys: ties keep the smaller value.
    for (const auto& [key, weight] : counts) {
        if (weight > best_weight) {
            best = key;
            best_weight = weight;
        }
    }
    return best;
}

}  // namespace

std::size_t char_count(const std::string& utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

int count_words(const std::string& text) {
    int n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

bool needs_space_between(const Span& left, const Span& right) {
    if (left.text.empty() || right.text.empty()) return false;
    if (left.text.back() == ' ' || right.text.front() == ' ') return false;
    const double size = std::min(left.font_size, right.font_size);
    return right.bbox.x0 - left.bbox.x1 > 0.15 * size;
}

double Line::baseline() const { return bbox.y1; }

double Line::dominant_size() const {
    double best = 0;
    std::size_t best_chars = 0;
    for (const auto& s : spans) {
        const std::size_t n = char_count(s.text);
        if (n > best_chars || (n == best_chars && s.font_size > best)) {
            best = s.font_size;
            best_chars = n;
        }
    }
    return best;
}

double Line::max_size() const {
    double m = 0;
    for (const auto& s : spans) m = std::max(m, s.font_size);
    return m;
}

bool Line::all_bold() const {
    return std::all_of(spans.begin(), spans.end(), [](const Span& s) { return s.bold; });
}

bool Line::rotated() const {
    return std::any_of(spans.begin(), spans.end(), [](const Span& s) { return s.rotated; });
}

std::string Line::text() const {
    std::string out;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (i > 0 && needs_space_between(spans[i - 1], spans[i])) out += ' ';
        out += spans[i].text;
    }
    return out;
}

double Block::max_size() const {
    double m = 0;
    for (const auto& l : lines) m = std::max(m, l.max_size());
    return m;
}

bool Block::all_bold() const {
    return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.all_bold(); });
}

std::string Block::text() const {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += ' ';
        out += l.text();
    }
    return out;
}

int Block::word_count() const { return count_words(text()); }

std::string repeat_signature(const Span& s) {
    std::string sig;
    for (double v : {s.bbox.x0, s.bbox.y0, s.bbox.x1, s.bbox.y1}) {
        sig += std::to_string(static_cast<long long>(std::llround(v)));
        sig += ',';
    }
    for (char c : s.text) sig += (c >= '0' && c <= '9') ? '#' : c;
    return sig;
}

RawDocument remove_headers_footers(const RawDocument& doc, const LayoutConfig& cfg) {
    if (doc.page_count < cfg.repeat_min_pages) return doc;
    std::map<std::string, std::set<int>> pages;
    for (const auto& s : doc.spans) pages[repeat_signature(s)].insert(s.page);
    RawDocument out = doc;
    const double threshold = cfg.repeat_page_fraction * doc.page_count;
    std::erase_if(out.spans, [&](const Span& s) {
        const auto n = pages[repeat_signature(s)].size();
        return n >= 2 && static_cast<double>(n) > threshold;
    });
    return out;
}

BodyStats estimate_body_stats(const RawDocument& doc, const LayoutConfig& cfg) {
    if (doc.spans.empty()) throw Error(ErrorCode::EmptyDocument, "document has no spans");
    std::map<double, double> weights;
    for (const auto& s : doc.spans) weights[bucket(s.font_size)] += static_cast<double>(char_count(s.text));
    BodyStats stats;
    stats.page_count = doc.page_count;
    stats.body_font_size = weighted_mode(weights);

    const auto lines = assemble_lines(doc, cfg);
    std::map<double, double> gaps;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& a = lines[i - 1];
        const Line& b = lines[i];
        if (a.page != b.page || a.rotated() || b.rotated()) continue;
        if (bucket(a.dominant_size()) != stats.body_font_size || bucket(b.dominant_size()) != stats.body_font_size)
            continue;
        const double gap = bucket(b.baseline() - a.baseline());
        if (gap > 0) gaps[gap] += 1;
    }
    stats.body_line_spacing = gaps.empty() ? 0.0 : weighted_mode(gaps);
    return stats;
}

std::vector<Line> assemble_lines(const RawDocument& doc, const LayoutConfig& cfg) {
    return assemble_lines(doc.spans, cfg);
}

std::vector<Line> assemble_lines(std::vector<Span> spans, const LayoutConfig& cfg) {
    std::stable_sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        if (a.page != b.page) return a.page < b.page;
        if (a.bbox.y1 != b.bbox.y1) return a.bbox.y1 < b.bbox.y1;
        return a.bbox.x0 < b.bbox.x0;
    });
    std::vector<Line> lines;
    std::vector<Span> current;
    double anchor = 0;
    double anchor_size = 0;
    auto close = [&] {
        if (!current.empty()) lines.push_back(make_line(std::move(current)));
        current.clear();
    };
    for (auto& s : spans) {
        if (s.rotated) {
            lines.push_back(make_line({s}));
            continue;
        }
        const bool joins = !current.empty() && current.front().page == s.page &&
                           std::abs(s.bbox.y1 - anchor) <=
                               cfg.line_merge_tolerance * std::min(anchor_size, s.font_size);
        if (!joins) {
            close();
            anchor = s.bbox.y1;
            anchor_size = s.font_size;
        } else {
            anchor_size = std::min(anchor_size, s.font_size);
        }
        current.push_back(std::move(s));
    }
    close();
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        if (a.page != b.page) return a.page < b.page;
        if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
        return a.bbox.x0 < b.bbox.x0;
    });
    return lines;
}

std::vector<Block> assemble_blocks(const std::vector<Line>& lines, const BodyStats& stats, const LayoutConfig& cfg) {
    const double spacing =
        stats.body_line_spacing > 0 ? stats.body_line_spacing : 1.2 * stats.body_font_size;
    const double cutoff = cfg.block_gap_factor * spacing;

    auto classify = [&](Block& b) {
        if (b.lines.size() == 1 && b.lines.front().rotated()) {
            b.kind = BlockKind::other;
        } else if (b.max_size() > stats.body_font_size + 0.5 ||
                   (b.all_bold() && b.word_count() <= 12 && b.max_size() >= stats.body_font_size)) {
            b.kind = BlockKind::heading_candidate;
        } else {
            b.kind = BlockKind::paragraph;
        }
    };

    std::vector<Block> blocks;
    std::vector<Line> current;
    auto close = [&] {
        if (current.empty()) return;
        Block b = make_block(std::move(current));
        classify(b);
        blocks.push_back(std::move(b));
        current.clear();
    };
    for (const auto& line : lines) {
        if (!current.empty()) {
            const Line& prev = current.back();
            const bool same_page = prev.page == line.page;
            const bool close_enough = std::abs(line.baseline() - prev.baseline()) <= cutoff;
            const bool overlap = line.bbox.x0 <= prev.bbox.x1 && prev.bbox.x0 <= line.bbox.x1;
            const bool same_style = bucket(prev.dominant_size()) == bucket(line.dominant_size()) &&
                                    prev.all_bold() == line.all_bold();
            const bool plain = !prev.rotated() && !line.rotated();
            if (!(same_page && close_enough && overlap && same_style && plain)) close();
        }
        current.push_back(line);
    }
    close();
    return blocks;
}

RawDocument bind_links(const RawDocument& doc, const LayoutConfig& cfg) {
    RawDocument out = doc;
    for (auto& s : out.spans) {
        const double area = s.bbox.area();
        double best = 0;
        for (const auto& l : doc.links) {
            if (l.page != s.page) continue;
            const double inter = s.bbox.intersection_area(l.bbox);
            const bool covered = area > 0 ? inter >= cfg.link_overlap * area : l.bbox.contains(s.bbox.center());
            if (covered && (inter > best || s.uri.empty())) {
                s.uri = l.uri;
                best = inter;
            }
        }
    }
    return out;
}

std::optional<std::size_t> main_title_block(const std::vector<Block>& blocks, const BodyStats& stats) {
    const int first_page = 0;
    double page_max = 0;
    for (const auto& b : blocks)
        if (b.page == first_page && b.kind != BlockKind::table_region) page_max = std::max(page_max, b.max_size());
    if (page_max <= stats.body_font_size) return std::nullopt;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.page != first_page || b.kind == BlockKind::table_region || b.max_size() != page_max) continue;
        if (!best || b.bbox.y0 < blocks[*best].bbox.y0) best = i;
    }
    return best;
}

std::optional<std::string> infer_main_title(const std::vector<Block>& blocks, const BodyStats& stats) {
    const auto i = main_title_block(blocks, stats);
    if (!i) return std::nullopt;
    return blocks[*i].text();
}

}  // namespace chunkwise
