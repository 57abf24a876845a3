#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chunkwise/headings.hpp"
#include "chunkwise/layout.hpp"
#include "chunkwise/tables.hpp"

namespace chunkwise {

struct PageRange {
    int start = 0;
    int end = 0;

    friend bool operator==(const PageRange&, const PageRange&) = default;
};

struct MarkdownDoc {
    std::string text;
    // One slot per markdown line; blank lines are unmapped. Empty for sources without pages.
    std::vector<std::optional<PageRange>> line_pages;
    std::optional<std::string> main_title;

    bool paginated() const { return !line_pages.empty(); }
    std::vector<std::string> lines() const;
};

/// Splits on '\n'; a text of n newlines has n + 1 lines.
std::vector<std::string> split_lines(const std::string& text);

/// `title_block` names the block holding the main title so it is not emitted twice.
MarkdownDoc emit(const std::vector<Block>& blocks, const std::vector<Heading>& headings,
                 const std::vector<Table>& tables, const std::optional<std::string>& main_title,
                 std::optional<std::size_t> title_block = std::nullopt);

/// Markdown source without page information.
MarkdownDoc markdown_from_text(std::string text);

/// Throws Error(RangeOutOfBounds) for an invalid range or a document without pages.
PageRange page_range(const MarkdownDoc& md, int line_start, int line_end);

/// Inline markdown for one line: bold/italic wrapping and link syntax.
std::string render_line(const Line& line);

}  // namespace chunkwise
