#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chunkwise/geometry.hpp"

namespace chunkwise {

/// A run of consecutive characters sharing one font, size and baseline.
struct Span {
    int page = 0;
    Rect bbox;
    std::string text;
    double font_size = 0.0;
    std::string font_name;
    bool bold = false;
    bool italic = false;
    bool mono = false;
    // Non-horizontal text; such spans never merge into lines with others.
    bool rotated = false;
    // Set by link binding, empty otherwise.
    std::string uri;

    friend bool operator==(const Span&, const Span&) = default;
};

struct DrawSegment {
    int page = 0;
    Point p0;
    Point p1;
    double width = 0.0;

    friend bool operator==(const DrawSegment&, const DrawSegment&) = default;
};

struct LinkBox {
    int page = 0;
    Rect bbox;
    std::string uri;

    friend bool operator==(const LinkBox&, const LinkBox&) = default;
};

struct TocEntry {
    std::string title;
    int level = 1;
    int page = 0;

    friend bool operator==(const TocEntry&, const TocEntry&) = default;
};

struct PageSize {
    double width = 0.0;
    double height = 0.0;

    friend bool operator==(const PageSize&, const PageSize&) = default;
};

struct RawDocument {
    int page_count = 0;
    std::vector<PageSize> page_sizes;
    std::vector<Span> spans;
    std::vector<DrawSegment> segments;
    std::vector<LinkBox> links;
    std::optional<std::vector<TocEntry>> toc;

    friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

/// Throws Error(InvariantViolation) naming the first broken invariant.
void validate(const RawDocument& doc);

/// Sorts spans by (page, y0, x0); stable for ties.
void sort_spans(std::vector<Span>& spans);

/// Reads a fixture JSON file and validates it.
RawDocument load_fixture(const std::filesystem::path& json_path);
RawDocument parse_fixture(const std::string& json_text);

/// Canonical JSON: sorted keys, floats with exactly three decimals.
std::string to_fixture_json(const RawDocument& doc);
void dump_fixture(const RawDocument& doc, const std::filesystem::path& json_path);

}  // namespace chunkwise
