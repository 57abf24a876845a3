#include "chunkwise/headings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>

namespace chunkwise {

namespace {

bool eligible(const Block& b) { return b.kind != BlockKind::other && b.kind != BlockKind::table_region; }

const std::regex& numbering_re() {
    static const std::regex re(R"(^\s*(\d{1,3}(?:\.(?:\d{1,3}|[A-Za-z]))*)(\.?)(?:\s+|$))");
    return re;
}

// optional numbering, title, dot leaders or spacing, page number
const std::regex& toc_entry_re() {
    static const std::regex re(
        R"(^\s*(?:\d{1,3}(?:\.(?:\d{1,3}|[A-Za-z]))*\.?\s+)?(\S.*?)(?:\s*(?:\.\s?|\xE2\x80\xA6){2,}\s*|\s+)(\d{1,4})\s*$)");
    return re;
}

std::string fold(std::string_view text) {
    std::string out;
    bool space = false;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

}  // namespace

std::string to_string(HeadingSource s) {
    switch (s) {
        case HeadingSource::metadata_toc: return "metadata_toc";
        case HeadingSource::parsed_toc: return "parsed_toc";
        case HeadingSource::font_size: return "font_size";
    }
    return "font_size";
}

std::optional<int> infer_numbering_level(std::string_view title) {
    std::cmatch m;
    if (!std::regex_search(title.begin(), title.end(), m, numbering_re())) return std::nullopt;
    const std::string numbering = m[1].str();
    return static_cast<int>(std::count(numbering.begin(), numbering.end(), '.')) + 1;
}

std::string normalize_heading_text(std::string_view text) {
    std::string s = fold(text);
    std::smatch m;
    if (std::regex_search(s, m, numbering_re())) s = m.suffix().str();
    // Trailing dot leaders and page number.
    static const std::regex tail(R"((?:\s*(?:\.\s?|\xE2\x80\xA6){2,}\s*\d*|\s*(?:\.\s?){2,})\s*$)");
    s = std::regex_replace(s, tail, "");
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

std::optional<std::vector<Heading>> headings_from_metadata(const RawDocument& doc, const std::vector<Block>& blocks,
                                                           const HeadingConfig& cfg) {
    if (!doc.toc || doc.toc->empty()) return std::nullopt;
    std::vector<std::string> block_keys;
    for (const auto& b : blocks) block_keys.push_back(normalize_heading_text(b.text()));
    std::set<std::size_t> used;
    std::vector<Heading> out;
    for (const auto& entry : *doc.toc) {
        const std::string key = normalize_heading_text(entry.title);
        if (key.empty()) continue;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (used.count(i) || !eligible(blocks[i]) || std::abs(blocks[i].page - entry.page) > 1) continue;
            if (block_keys[i] != key) continue;
            used.insert(i);
            out.push_back({blocks[i].text(), std::clamp(entry.level, 1, 6), i, HeadingSource::metadata_toc});
            break;
        }
    }
    if (static_cast<double>(out.size()) < cfg.metadata_match_rate * static_cast<double>(doc.toc->size()) || out.empty())
        return std::nullopt;
    std::sort(out.begin(), out.end(), [](const Heading& a, const Heading& b) { return a.block_ref < b.block_ref; });
    return out;
}

std::optional<std::vector<Heading>> detect_textual_toc(const std::vector<Block>& blocks, const HeadingConfig& cfg) {
    struct Entry {
        std::string text;
        double x0;
        std::size_t block;
    };
    std::vector<Entry> run;
    std::vector<Entry> best;
    auto finish = [&] {
        if (best.empty() && static_cast<int>(run.size()) >= cfg.toc_min_run) best = run;
        run.clear();
    };
    for (std::size_t b = 0; b < blocks.size() && best.empty(); ++b) {
        if (blocks[b].page >= cfg.toc_scan_pages) break;
        for (const auto& line : blocks[b].lines) {
            const std::string text = line.text();
            std::smatch m;
            if (std::regex_match(text, m, toc_entry_re()) && m[1].length() > 0) {
                run.push_back({text, line.bbox.x0, b});
            } else {
                finish();
            }
        }
    }
    finish();
    if (best.empty()) return std::nullopt;

    std::vector<int> levels(best.size(), 1);
    std::size_t numbered = 0;
    for (const auto& e : best)
        if (infer_numbering_level(e.text)) ++numbered;
    if (numbered * 2 > best.size()) {
        for (std::size_t i = 0; i < best.size(); ++i) levels[i] = infer_numbering_level(best[i].text).value_or(1);
    } else {
        std::vector<double> xs;
        for (const auto& e : best) xs.push_back(e.x0);
        std::sort(xs.begin(), xs.end());
        std::vector<double> starts;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (k == 0 || xs[k] - xs[k - 1] > cfg.indent_granularity) starts.push_back(xs[k]);
        for (std::size_t i = 0; i < best.size(); ++i) {
            const auto it = std::upper_bound(starts.begin(), starts.end(), best[i].x0);
            levels[i] = static_cast<int>(it - starts.begin());
        }
    }

    std::set<std::size_t> toc_blocks;
    for (const auto& e : best) toc_blocks.insert(e.block);
    std::set<std::size_t> used;
    std::vector<Heading> out;
    for (std::size_t i = 0; i < best.size(); ++i) {
        std::smatch m;
        std::regex_match(best[i].text, m, toc_entry_re());
        const std::string key = normalize_heading_text(m[1].str());
        if (key.empty()) continue;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (toc_blocks.count(b) || used.count(b) || !eligible(blocks[b])) continue;
            if (normalize_heading_text(blocks[b].text()) != key) continue;
            used.insert(b);
            out.push_back({blocks[b].text(), std::clamp(levels[i], 1, 6), b, HeadingSource::parsed_toc});
            break;
        }
    }
    if (out.empty()) return std::nullopt;
    std::sort(out.begin(), out.end(), [](const Heading& a, const Heading& b) { return a.block_ref < b.block_ref; });
    return out;
}

std::vector<Heading> headings_from_font_size(const std::vector<Block>& blocks, const BodyStats& stats,
                                             const HeadingConfig& cfg) {
    auto bucket = [](double v) { return std::round(v * 2.0) / 2.0; };
    std::vector<std::size_t> candidates;
    std::set<double, std::greater<>> sizes;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (!eligible(b)) continue;
        const double size = b.max_size();
        const bool larger = size > stats.body_font_size + cfg.size_margin;
        const bool bold_short = b.all_bold() && b.word_count() <= cfg.bold_max_words && size >= stats.body_font_size;
        if (!larger && !bold_short) continue;
        candidates.push_back(i);
        sizes.insert(bucket(size));
    }
    std::map<double, int> level_of;
    int level = 0;
    for (double s : sizes) level_of[s] = std::min(++level, 6);
    std::vector<Heading> out;
    for (std::size_t i : candidates)
        out.push_back({blocks[i].text(), level_of[bucket(blocks[i].max_size())], i, HeadingSource::font_size});
    return out;
}

std::vector<Heading> resolve_headings(const RawDocument& doc, const std::vector<Block>& blocks,
                                      const BodyStats& stats, const HeadingConfig& cfg) {
    if (auto h = headings_from_metadata(doc, blocks, cfg); h && !h->empty()) return *h;
    if (auto h = detect_textual_toc(blocks, cfg); h && !h->empty()) return *h;
    return headings_from_font_size(blocks, stats, cfg);
}

}  // namespace chunkwise
