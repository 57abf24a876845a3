#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chunkwise/geometry.hpp"

namespace chunkwise::pdf {

enum class Face {
    Helvetica,
    HelveticaBold,
    HelveticaOblique,
    HelveticaBoldOblique,
    TimesRoman,
    TimesBold,
    TimesItalic,
    Courier,
};

/// Minimal PDF producer for generated test documents and sample corpora.
/// Coordinates are top-left based like the rest of the library; text y is the
/// baseline. Only the standard 14 faces are used, WinAnsi encoded, with /Widths.
class Writer {
public:
    explicit Writer(bool compress = true) : compress_(compress) {}

    int add_page(double width = 612.0, double height = 792.0);
    void text(int page, double x, double baseline_y, std::string_view utf8, Face face, double size);
    void line(int page, Point a, Point b, double width = 0.5);
    void filled_rect(int page, Rect r);
    void link(int page, Rect rect, std::string uri);
    void outline(std::string title, int level, int page);

    int page_count() const { return static_cast<int>(pages_.size()); }
    double page_height(int page) const { return pages_.at(page).height; }

    static double text_width(std::string_view utf8, Face face, double size);

    std::string bytes() const;
    void save(const std::filesystem::path& path) const;

private:
    struct PageData {
        double width = 612;
        double height = 792;
        std::string content;
        std::vector<std::pair<Rect, std::string>> links;
    };
    struct OutlineItem {
        std::string title;
        int level;
        int page;
    };

    bool compress_;
    std::vector<PageData> pages_;
    std::vector<OutlineItem> outline_;
};

}  // namespace chunkwise::pdf
