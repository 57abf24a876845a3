#pragma once

#include <random>
#include <string>

#include "chunkwise/raw_document.hpp"

namespace fixtureprops {

// Values on the 0.001 grid survive the three-decimal encoding exactly.
inline int millis(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo * 1000, hi * 1000)(rng); }

inline double grid(std::mt19937& rng, int lo, int hi) { return millis(rng, lo, hi) / 1000.0; }

inline std::string random_text(std::mt19937& rng) {
    static const char* const pieces[] = {"alpha", "Beta", "\xC3\xA9t\xC3\xA9", "x\"q", "back\\slash", "tab\tstop",
                                         "1.2", "\xE2\x80\x94", "na\xC3\xAFve", "\xE4\xB8\xAD\xE6\x96\x87", "{json}"};
    std::string t = pieces[rng() % std::size(pieces)];
    for (int i = rng() % 3; i > 0; --i) t += std::string(" ") + pieces[rng() % std::size(pieces)];
    return t;
}

inline chunkwise::RawDocument random_document(std::mt19937& rng) {
    using namespace chunkwise;
    RawDocument d;
    d.page_count = 1 + static_cast<int>(rng() % 5);
    for (int p = 0; p < d.page_count; ++p) d.page_sizes.push_back({grid(rng, 200, 900), grid(rng, 200, 1200)});
    auto page = [&] { return static_cast<int>(rng() % static_cast<unsigned>(d.page_count)); };
    auto rect = [&] {
        const int x0 = millis(rng, 0, 500), y0 = millis(rng, 0, 700);
        return Rect{x0 / 1000.0, y0 / 1000.0, (x0 + millis(rng, 0, 100)) / 1000.0, (y0 + millis(rng, 0, 40)) / 1000.0};
    };
    for (int i = rng() % 30; i > 0; --i) {
        Span s;
        s.page = page();
        s.bbox = rect();
        s.text = random_text(rng);
        s.font_size = (millis(rng, 1, 30) + 500) / 1000.0;
        s.font_name = rng() % 2 ? "Helvetica" : "CMR10";
        s.bold = rng() % 2;
        s.italic = rng() % 3 == 0;
        s.mono = rng() % 5 == 0;
        s.rotated = rng() % 7 == 0;
        if (rng() % 6 == 0) s.uri = "https://example.org/" + std::to_string(rng() % 100);
        d.spans.push_back(s);
    }
    sort_spans(d.spans);
    for (int i = rng() % 10; i > 0; --i)
        d.segments.push_back({page(), {grid(rng, 0, 600), grid(rng, 0, 800)}, {grid(rng, 0, 600), grid(rng, 0, 800)},
                              grid(rng, 0, 3)});
    for (int i = rng() % 4; i > 0; --i) d.links.push_back({page(), rect(), "https://example.com/p?q=" + std::to_string(i)});
    if (rng() % 2) {
        std::vector<TocEntry> toc;
        for (int i = rng() % 5; i > 0; --i) toc.push_back({random_text(rng), 1 + static_cast<int>(rng() % 3), page()});
        d.toc = toc;
    }
    return d;
}

inline bool round_trips(const chunkwise::RawDocument& d) {
    const std::string once = chunkwise::to_fixture_json(d);
    const auto back = chunkwise::parse_fixture(once);
    return back == d && chunkwise::to_fixture_json(back) == once;
}

}  // namespace fixtureprops
