#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chunkwise/raw_document.hpp"

namespace chunkwise {

struct LayoutConfig {
    // Spans on one line when baselines differ by at most this fraction of the smaller size.
    double line_merge_tolerance = 0.3;
    // Lines join a block when the baseline gap is at most this multiple of the body spacing.
    double block_gap_factor = 1.5;
    // Header/footer signatures must recur on strictly more than this fraction of pages.
    double repeat_page_fraction = 0.33;
    int repeat_min_pages = 3;
    // Fraction of a span's area a link box must cover to bind.
    double link_overlap = 0.5;
};

struct Line {
    std::vector<Span> spans;
    Rect bbox;
    int page = 0;

    double baseline() const;
    // Size of the span carrying the most characters.
    double dominant_size() const;
    double max_size() const;
    bool all_bold() const;
    bool rotated() const;
    std::string text() const;
};

enum class BlockKind { paragraph, heading_candidate, table_region, other };

struct Block {
    std::vector<Line> lines;
    Rect bbox;
    int page = 0;
    BlockKind kind = BlockKind::paragraph;

    double max_size() const;
    bool all_bold() const;
    std::string text() const;
    int word_count() const;
};

struct BodyStats {
    double body_font_size = 0.0;
    double body_line_spacing = 0.0;
    int page_count = 0;
};

/// Whether rendered text needs a space between two neighbouring spans of a line.
bool needs_space_between(const Span& left, const Span& right);

/// Number of code points.
std::size_t char_count(const std::string& utf8);

int count_words(const std::string& text);

/// Position signature used for header/footer detection.
std::string repeat_signature(const Span& s);

RawDocument remove_headers_footers(const RawDocument& doc, const LayoutConfig& cfg = {});

/// Throws Error(EmptyDocument) when there are no spans.
BodyStats estimate_body_stats(const RawDocument& doc, const LayoutConfig& cfg = {});

/// Lines sorted by (page, y0, x0). Rotated spans always form their own line.
std::vector<Line> assemble_lines(const RawDocument& doc, const LayoutConfig& cfg = {});
std::vector<Line> assemble_lines(std::vector<Span> spans, const LayoutConfig& cfg = {});

std::vector<Block> assemble_blocks(const std::vector<Line>& lines, const BodyStats& stats,
                                   const LayoutConfig& cfg = {});

RawDocument bind_links(const RawDocument& doc, const LayoutConfig& cfg = {});

std::optional<std::string> infer_main_title(const std::vector<Block>& blocks, const BodyStats& stats);

/// Index of the block chosen by infer_main_title, if any.
std::optional<std::size_t> main_title_block(const std::vector<Block>& blocks, const BodyStats& stats);

}  // namespace chunkwise
