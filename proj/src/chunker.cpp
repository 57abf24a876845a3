#include "chunkwise/chunker.hpp"

#include "chunkwise/errors.hpp"
#include "chunkwise/layout.hpp"
#include "json.hpp"

namespace chunkwise {

namespace {

bool is_fence(const std::string& line) {
    const auto p = line.find_first_not_of(' ');
    return p != std::string::npos && p < 4 && (line.compare(p, 3, "```") == 0 || line.compare(p, 3, "~~~") == 0);
}

bool is_table_row(const std::string& line) {
    const auto p = line.find_first_not_of(' ');
    return p != std::string::npos && line[p] == '|';
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::string join_headers(const std::vector<std::string>& headers) {
    std::string out;
    for (const auto& h : headers) {
        if (!out.empty()) out += '\n';
        out += h;
    }
    return out;
}

// Builds a chunk from lines [begin, end), trimming blank edges. Empty when nothing is left.
std::optional<Chunk> make_chunk(const std::vector<std::string>& lines, int begin, int end,
                                const std::vector<std::string>& headers, int line_offset = 0) {
    while (begin < end && blank(lines[begin - line_offset])) ++begin;
    while (end > begin && blank(lines[end - 1 - line_offset])) --end;
    if (begin >= end) return std::nullopt;
    Chunk c;
    c.parent_headers = headers;
    c.start_line = begin;
    c.end_line = end - 1;
    std::string content;
    for (int i = begin; i < end; ++i) {
        if (i > begin) content += '\n';
        content += lines[i - line_offset];
    }
    c.word_count = count_words(content);
    c.text = headers.empty() ? content : join_headers(headers) + "\n\n" + content;
    return c;
}

int words_in(const std::vector<std::string>& lines, int begin, int end) {
    int n = 0;
    for (int i = begin; i < end; ++i) n += count_words(lines[i]);
    return n;
}

void chunk_node(const TocNode& node, const std::vector<std::string>& lines, const ChunkerConfig& cfg,
                std::vector<std::string> headers, std::vector<Chunk>& out) {
    if (node.heading_line) headers.push_back(node.heading);
    // The root always splits into its preamble and top-level sections.
    const bool intact = node.heading_line && words_in(lines, node.content_begin, node.end) <= cfg.soft_limit_words;
    if (intact || node.children.empty()) {
        if (auto c = make_chunk(lines, node.content_begin, node.end, headers)) out.push_back(std::move(*c));
        return;
    }
    if (auto c = make_chunk(lines, node.content_begin, node.content_end, headers)) out.push_back(std::move(*c));
    for (const auto& child : node.children) chunk_node(child, lines, cfg, headers, out);
}

}  // namespace

void ChunkerConfig::validate() const {
    if (!(min_words > 0 && min_words < soft_limit_words && soft_limit_words <= hard_limit_words)) {
        throw Error(ErrorCode::ConfigError, "chunker limits must satisfy 0 < min_words < soft_limit <= hard_limit (got " +
                                                std::to_string(min_words) + ", " + std::to_string(soft_limit_words) +
                                                ", " + std::to_string(hard_limit_words) + ")");
    }
}

std::string Chunk::content() const {
    if (parent_headers.empty()) return text;
    return text.substr(join_headers(parent_headers).size() + 2);
}

std::optional<int> atx_level(const std::string& line) {
    int n = 0;
    while (n < static_cast<int>(line.size()) && line[n] == '#') ++n;
    if (n < 1 || n > 6) return std::nullopt;
    if (n < static_cast<int>(line.size()) && line[n] != ' ' && line[n] != '\t') return std::nullopt;
    return n;
}

TocNode build_toc_tree(const MarkdownDoc& md) {
    const auto lines = md.lines();
    const int count = static_cast<int>(lines.size());
    TocNode root;
    root.end = count;
    root.content_end = count;
    std::vector<TocNode*> stack{&root};
    bool in_fence = false;
    for (int i = 0; i < count; ++i) {
        if (is_fence(lines[i])) in_fence = !in_fence;
        if (in_fence) continue;
        const auto level = atx_level(lines[i]);
        if (!level) continue;
        // Close every open node at this level or deeper.
        while (stack.size() > 1 && stack.back()->level >= *level) {
            stack.back()->end = i;
            if (stack.back()->children.empty()) stack.back()->content_end = i;
            stack.pop_back();
        }
        TocNode* parent = stack.back();
        if (parent->children.empty()) parent->content_end = i;
        TocNode node;
        node.heading_line = i;
        node.level = *level;
        node.heading = lines[i];
        node.content_begin = i + 1;
        node.content_end = count;
        node.end = count;
        parent->children.push_back(std::move(node));
        stack.push_back(&parent->children.back());
    }
    return root;
}

std::vector<Chunk> chunk_tree(const TocNode& root, const MarkdownDoc& md, const ChunkerConfig& cfg) {
    std::vector<Chunk> out;
    chunk_node(root, md.lines(), cfg, {}, out);
    return out;
}

std::vector<Chunk> hard_split(const Chunk& chunk, const ChunkerConfig& cfg) {
    if (chunk.word_count <= cfg.hard_limit_words) return {chunk};
    const auto lines = split_lines(chunk.content());
    const int n = static_cast<int>(lines.size());

    // Atomic units as half-open ranges of content lines.
    std::vector<std::pair<int, int>> units;
    for (int i = 0; i < n;) {
        int j = i + 1;
        if (is_fence(lines[i])) {
            while (j < n && !is_fence(lines[j])) ++j;
            if (j < n) ++j;
        } else if (is_table_row(lines[i])) {
            while (j < n && is_table_row(lines[j])) ++j;
        }
        units.emplace_back(i, j);
        i = j;
    }

    std::vector<Chunk> out;
    const int base = chunk.start_line;
    auto emit = [&](int begin, int end) {
        if (auto c = make_chunk(lines, base + begin, base + end, chunk.parent_headers, base)) {
            c->doc_id = chunk.doc_id;
            out.push_back(std::move(*c));
        }
    };
    int begin = 0;
    int words = 0;
    for (const auto& [a, b] : units) {
        const int w = words_in(lines, a, b);
        if (words > 0 && words + w > cfg.hard_limit_words) {
            emit(begin, a);
            begin = a;
            words = 0;
        }
        words += w;
    }
    emit(begin, n);
    return out;
}

std::vector<Chunk> filter_min_words(std::vector<Chunk> chunks, const ChunkerConfig& cfg) {
    std::erase_if(chunks, [&](const Chunk& c) { return c.word_count < cfg.min_words; });
    return chunks;
}

std::vector<Chunk> attach_pages(std::vector<Chunk> chunks, const MarkdownDoc& md) {
    if (!md.paginated()) return chunks;
    for (auto& c : chunks) {
        const PageRange r = page_range(md, c.start_line, c.end_line);
        c.start_page = r.start;
        c.end_page = r.end;
    }
    return chunks;
}

std::vector<Chunk> chunk_markdown(const MarkdownDoc& md, const ChunkerConfig& cfg, const std::string& doc_id) {
    cfg.validate();
    std::vector<Chunk> split;
    for (auto& c : chunk_tree(build_toc_tree(md), md, cfg)) {
        c.doc_id = doc_id;
        for (auto& s : hard_split(c, cfg)) split.push_back(std::move(s));
    }
    return attach_pages(filter_min_words(std::move(split), cfg), md);
}

std::string chunk_json_line(const Chunk& c) {
    nlohmann::ordered_json j;
    j["text"] = c.text;
    j["headers"] = c.parent_headers;
    j["start_line"] = c.start_line;
    j["start_page"] = c.start_page ? nlohmann::ordered_json(*c.start_page) : nlohmann::ordered_json(nullptr);
    j["end_page"] = c.end_page ? nlohmann::ordered_json(*c.end_page) : nlohmann::ordered_json(nullptr);
    j["word_count"] = c.word_count;
    j["doc_id"] = c.doc_id;
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string chunk_jsonl(const std::vector<Chunk>& chunks) {
    std::string out;
    for (const auto& c : chunks) out += chunk_json_line(c) + "\n";
    return out;
}

}  // namespace chunkwise
