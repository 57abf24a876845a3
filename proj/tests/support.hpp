#pragma once

#include <random>
#include <string>
#include <vector>

#include "chunkwise/raw_document.hpp"

namespace testsupport {

inline chunkwise::Span span(int page, double x0, double baseline, const std::string& text, double size = 10.0,
                            bool bold = false) {
    chunkwise::Span s;
    s.page = page;
    s.text = text;
    s.font_size = size;
    s.font_name = bold ? "Helvetica-Bold" : "Helvetica";
    s.bold = bold;
    // Rough advance of half an em per character.
    s.bbox = {x0, baseline - 0.8 * size, x0 + 0.5 * size * static_cast<double>(text.size()), baseline};
    return s;
}

inline chunkwise::RawDocument document(int pages, std::vector<chunkwise::Span> spans) {
    chunkwise::RawDocument d;
    d.page_count = pages;
    d.page_sizes.assign(pages, {612, 792});
    d.spans = std::move(spans);
    chunkwise::sort_spans(d.spans);
    return d;
}

inline std::string random_word(std::mt19937& rng) {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "data", "model", "table", "page",
                                  "river", "stone", "light", "note",  "value", "index", "green", "atlas"};
    return words[std::uniform_int_distribution<int>(0, 15)(rng)];
}

inline std::string random_words(std::mt19937& rng, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += random_word(rng);
    }
    return out;
}

}  // namespace testsupport
