#include "chunkwise/markdown.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "chunkwise/errors.hpp"

namespace chunkwise {

namespace {

struct Item {
    int page;
    double y0;
    std::string text;
};

std::string decorate(const std::string& text, const Span& style) {
    std::string out = text;
    if (style.bold && style.italic) out = "***" + out + "***";
    else if (style.bold) out = "**" + out + "**";
    else if (style.italic) out = "*" + out + "*";
    if (!style.uri.empty()) out = "[" + out + "](" + style.uri + ")";
    return out;
}

bool same_style(const Span& a, const Span& b) { return a.bold == b.bold && a.italic == b.italic && a.uri == b.uri; }

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (l.empty()) continue;
        if (out.empty()) {
            out = l;
        } else if (out.size() >= 2 && out.back() == '-' && out[out.size() - 2] != ' ' &&
                   std::islower(static_cast<unsigned char>(l.front()))) {
            out.pop_back();
            out += l;
        } else {
            out += ' ' + l;
        }
    }
    return out;
}

// Keeps body text from being read back as a heading or a table row.
std::string protect(std::string text) {
    std::size_t hashes = 0;
    while (hashes < text.size() && text[hashes] == '#') ++hashes;
    if ((hashes > 0 && (hashes == text.size() || text[hashes] == ' ')) || (!text.empty() && text.front() == '|'))
        text.insert(text.begin(), '\\');
    return text;
}

}  // namespace

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto end = text.find('\n', pos);
        if (end == std::string::npos) {
            out.push_back(text.substr(pos));
            break;
        }
        out.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

std::vector<std::string> MarkdownDoc::lines() const { return split_lines(text); }

std::string render_line(const Line& line) {
    std::string out;
    std::size_t i = 0;
    while (i < line.spans.size()) {
        std::size_t j = i;
        std::string group = line.spans[i].text;
        while (j + 1 < line.spans.size() && same_style(line.spans[j + 1], line.spans[i])) {
            if (needs_space_between(line.spans[j], line.spans[j + 1])) group += ' ';
            group += line.spans[j + 1].text;
            ++j;
        }
        if (i > 0 && needs_space_between(line.spans[i - 1], line.spans[i])) out += ' ';
        out += decorate(group, line.spans[i]);
        i = j + 1;
    }
    return out;
}

MarkdownDoc emit(const std::vector<Block>& blocks, const std::vector<Heading>& headings,
                 const std::vector<Table>& tables, const std::optional<std::string>& main_title,
                 std::optional<std::size_t> title_block) {
    std::map<std::size_t, const Heading*> heading_at;
    for (const auto& h : headings) heading_at[h.block_ref] = &h;
    const int shift = main_title ? 1 : 0;

    std::vector<Item> items;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (title_block && *title_block == i) continue;
        const Block& b = blocks[i];
        std::string text;
        if (auto it = heading_at.find(i); it != heading_at.end()) {
            const int level = std::min(it->second->level + shift, 6);
            text = std::string(level, '#') + " " + it->second->text;
        } else {
            std::vector<std::string> rendered;
            for (const auto& l : b.lines) rendered.push_back(render_line(l));
            text = protect(join_lines(rendered));
        }
        if (!text.empty()) items.push_back({b.page, b.bbox.y0, std::move(text)});
    }
    for (const auto& t : tables) items.push_back({t.grid.page, t.grid.ys.front(), t.markdown});
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        return a.page != b.page ? a.page < b.page : a.y0 < b.y0;
    });

    MarkdownDoc md;
    md.main_title = main_title;
    if (main_title) {
        const int page = title_block ? blocks[*title_block].page : 0;
        items.insert(items.begin(), Item{page, 0, "# " + *main_title});
    }
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k > 0) {
            md.text += "\n\n";
            md.line_pages.push_back(std::nullopt);
        }
        const auto lines = split_lines(items[k].text);
        for (std::size_t l = 0; l < lines.size(); ++l) {
            if (l > 0) md.text += '\n';
            md.text += lines[l];
            md.line_pages.push_back(lines[l].empty() ? std::nullopt
                                                     : std::optional<PageRange>({items[k].page, items[k].page}));
        }
    }
    if (items.empty()) md.line_pages.clear();
    return md;
}

MarkdownDoc markdown_from_text(std::string text) {
    MarkdownDoc md;
    md.text = std::move(text);
    return md;
}

PageRange page_range(const MarkdownDoc& md, int line_start, int line_end) {
    const int count = static_cast<int>(md.line_pages.size());
    if (!md.paginated()) throw Error(ErrorCode::RangeOutOfBounds, "document has no page information");
    if (line_start < 0 || line_start > line_end || line_end >= count) {
        throw Error(ErrorCode::RangeOutOfBounds, "line range [" + std::to_string(line_start) + ", " +
                                                     std::to_string(line_end) + "] outside 0.." +
                                                     std::to_string(count - 1));
    }
    std::optional<PageRange> out;
    auto add = [&](const PageRange& p) {
        if (!out) out = p;
        out->start = std::min(out->start, p.start);
        out->end = std::max(out->end, p.end);
    };
    // Blank lines take the page of the nearest mapped line above them.
    std::optional<PageRange> above;
    for (int i = line_start - 1; i >= 0 && !above; --i) above = md.line_pages[i];
    for (int i = line_start; i <= line_end; ++i) {
        if (md.line_pages[i]) above = md.line_pages[i];
        if (above) add(*above);
    }
    if (out) return *out;
    for (int i = line_end + 1; i < count; ++i)
        if (md.line_pages[i]) return *md.line_pages[i];
    throw Error(ErrorCode::RangeOutOfBounds, "no mapped line near range");
}

}  // namespace chunkwise
