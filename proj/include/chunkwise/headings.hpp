#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chunkwise/layout.hpp"

namespace chunkwise {

enum class HeadingSource { metadata_toc, parsed_toc, font_size };

std::string to_string(HeadingSource s);

struct Heading {
    std::string text;
    int level = 1;
    std::size_t block_ref = 0;
    HeadingSource source = HeadingSource::font_size;

    friend bool operator==(const Heading&, const Heading&) = default;
};

struct HeadingConfig {
    double metadata_match_rate = 0.5;
    int toc_min_run = 4;
    int toc_scan_pages = 10;
    double indent_granularity = 5.0;
    int bold_max_words = 12;
    double size_margin = 0.5;
};

/// Case-folded, whitespace-collapsed text with leading numbering and trailing
/// dot leaders or page numbers removed.
std::string normalize_heading_text(std::string_view text);

/// Count of dot-separated numbering components at the start: "1." is 1, "1.1.a" is 3.
std::optional<int> infer_numbering_level(std::string_view title);

// Blocks of kind `other` or `table_region` are never headings.
std::optional<std::vector<Heading>> headings_from_metadata(const RawDocument& doc, const std::vector<Block>& blocks,
                                                           const HeadingConfig& cfg = {});
std::optional<std::vector<Heading>> detect_textual_toc(const std::vector<Block>& blocks,
                                                       const HeadingConfig& cfg = {});
std::vector<Heading> headings_from_font_size(const std::vector<Block>& blocks, const BodyStats& stats,
                                             const HeadingConfig& cfg = {});

/// First non-empty tier among metadata ToC, textual ToC and font size.
std::vector<Heading> resolve_headings(const RawDocument& doc, const std::vector<Block>& blocks,
                                      const BodyStats& stats, const HeadingConfig& cfg = {});

}  // namespace chunkwise
