#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chunkwise/markdown.hpp"

namespace chunkwise {

struct ChunkerConfig {
    int soft_limit_words = 250;
    int hard_limit_words = 400;
    int min_words = 15;

    /// Throws Error(ConfigError) unless 0 < min_words < soft_limit_words <= hard_limit_words.
    void validate() const;
};

/// Section of the markdown. Line ranges are half-open.
struct TocNode {
    std::optional<int> heading_line;
    int level = 0;
    std::string heading;
    int content_begin = 0;
    int content_end = 0;
    int end = 0;
    std::vector<TocNode> children;
};

struct Chunk {
    std::string text;
    std::vector<std::string> parent_headers;
    // Content lines start_line..end_line (inclusive) of the source markdown.
    int start_line = 0;
    int end_line = 0;
    std::optional<int> start_page;
    std::optional<int> end_page;
    int word_count = 0;
    std::string doc_id;

    std::string content() const;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// ATX heading level of a markdown line, if it is one.
std::optional<int> atx_level(const std::string& line);

TocNode build_toc_tree(const MarkdownDoc& md);
std::vector<Chunk> chunk_tree(const TocNode& root, const MarkdownDoc& md, const ChunkerConfig& cfg);
std::vector<Chunk> hard_split(const Chunk& chunk, const ChunkerConfig& cfg);
std::vector<Chunk> filter_min_words(std::vector<Chunk> chunks, const ChunkerConfig& cfg);
std::vector<Chunk> attach_pages(std::vector<Chunk> chunks, const MarkdownDoc& md);

/// build_toc_tree, chunk_tree, hard_split, filter_min_words, attach_pages.
std::vector<Chunk> chunk_markdown(const MarkdownDoc& md, const ChunkerConfig& cfg, const std::string& doc_id = "");

/// One JSON object per line.
std::string chunk_jsonl(const std::vector<Chunk>& chunks);
std::string chunk_json_line(const Chunk& chunk);

}  // namespace chunkwise
