#include <random>

#include "chunkwise/errors.hpp"
#include "chunkwise/markdown.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chunkwise;
using testsupport::document;
using testsupport::span;

namespace {

const BodyStats kStats{10, 14, 3};

std::vector<Block> blocks_of(std::vector<Span> spans, int pages = 1) {
    return assemble_blocks(assemble_lines(document(pages, std::move(spans))), kStats);
}

}  // namespace

TEST_CASE("heading and paragraph") {
    const auto blocks = blocks_of({span(0, 72, 60, "Intro", 14), span(0, 72, 100, "paragraph text")});
    const auto md = emit(blocks, {{"Intro", 1, 0, HeadingSource::font_size}}, {}, std::nullopt);
    CHECK(md.text == "# Intro\n\nparagraph text");
    REQUIRE(md.line_pages.size() == 3);
    CHECK(md.line_pages[0] == PageRange{0, 0});
    CHECK_FALSE(md.line_pages[1].has_value());
}

TEST_CASE("dehyphenation and paragraph recombination") {
    const auto blocks = blocks_of({span(0, 72, 100, "contin-"), span(0, 72, 114, "uation here"),
                                   span(0, 72, 128, "and a well-"), span(0, 72, 142, "Known name")});
    const auto md = emit(blocks, {}, {}, std::nullopt);
    CHECK(md.text == "continuation here and a well- Known name");
}

TEST_CASE("inline styles and links") {
    Span docs = span(0, 72, 100, "docs");
    docs.uri = "https://x";
    Span bold = span(0, 110, 100, "strong", 10, true);
    Span ital = span(0, 160, 100, "slanted");
    ital.italic = true;
    const auto blocks = blocks_of({docs, bold, ital});
    CHECK(emit(blocks, {}, {}, std::nullopt).text == "[docs](https://x) **strong** *slanted*");
}

TEST_CASE("main title shifts heading levels") {
    const auto blocks = blocks_of({span(0, 72, 40, "Report 2024", 24), span(0, 72, 100, "Intro", 14),
                                   span(0, 72, 140, "body words"), span(0, 72, 180, "Deep", 12)});
    const auto title = main_title_block(blocks, kStats);
    REQUIRE(title == std::optional<std::size_t>(0));
    const std::vector<Heading> hs = {{"Intro", 1, 1, HeadingSource::font_size}, {"Deep", 6, 3, HeadingSource::font_size}};
    const auto md = emit(blocks, hs, {}, std::string("Report 2024"), title);
    CHECK(md.text == "# Report 2024\n\n## Intro\n\nbody words\n\n###### Deep");
    CHECK(md.main_title == std::optional<std::string>("Report 2024"));
}

TEST_CASE("tables interleave by position") {
    Table t;
    t.grid.page = 0;
    t.grid.xs = {72, 200};
    t.grid.ys = {120, 140, 160};
    t.markdown = "| A |\n| --- |\n| 1 |";
    const auto blocks = blocks_of({span(0, 72, 100, "before"), span(0, 72, 200, "after")});
    const auto md = emit(blocks, {}, {t}, std::nullopt);
    CHECK(md.text == "before\n\n| A |\n| --- |\n| 1 |\n\nafter");
    CHECK(md.line_pages.size() == 7);
}

TEST_CASE("body text cannot masquerade as structure") {
    const auto md = emit(blocks_of({span(0, 72, 100, "# not a heading"), span(0, 72, 200, "| not a table")}), {}, {},
                         std::nullopt);
    CHECK(md.text == "\\# not a heading\n\n\\| not a table");
}

TEST_CASE("page ranges") {
    const auto blocks = blocks_of({span(0, 72, 100, "zero"), span(2, 72, 100, "two"), span(3, 72, 100, "three"),
                                   span(4, 72, 100, "four")},
                                  5);
    const auto md = emit(blocks, {}, {}, std::nullopt);
    // lines: zero, "", two, "", three, "", four
    CHECK(page_range(md, 0, 0) == PageRange{0, 0});
    CHECK(page_range(md, 2, 6) == PageRange{2, 4});
    CHECK(page_range(md, 5, 5) == PageRange{3, 3});
    CHECK(page_range(md, 3, 4) == PageRange{2, 3});
    CHECK_THROWS_AS(page_range(md, 3, 9), Error);
    CHECK_THROWS_AS(page_range(md, 2, 1), Error);
    CHECK_THROWS_AS(page_range(markdown_from_text("x"), 0, 0), Error);
}

TEST_CASE("emit invariants on random documents") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<Span> spans;
        int page = 0;
        double y = 40;
        const int n = std::uniform_int_distribution<int>(1, 40)(rng);
        for (int i = 0; i < n; ++i) {
            y += std::uniform_int_distribution<int>(14, 40)(rng);
            if (y > 700) {
                y = 50;
                page += std::uniform_int_distribution<int>(1, 2)(rng);
            }
            const double size = std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? 16 : 10;
            spans.push_back(span(page, 72, y, testsupport::random_words(rng, 3) + " w" + std::to_string(i) + "q", size));
        }
        const RawDocument d = document(page + 1, spans);
        const BodyStats st = estimate_body_stats(d);
        const auto blocks = assemble_blocks(assemble_lines(d), st);
        const auto title_i = main_title_block(blocks, st);
        auto marked = blocks;
        if (title_i) marked[*title_i].kind = BlockKind::other;
        const auto headings = resolve_headings(d, marked, st);
        const auto title = title_i ? std::optional<std::string>(blocks[*title_i].text()) : std::nullopt;
        const auto md = emit(marked, headings, {}, title, title_i);
        const auto lines = md.lines();
        REQUIRE(lines.size() == md.line_pages.size());
        int last = -1;
        std::size_t atx = 0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (!lines[i].empty()) {
                REQUIRE(md.line_pages[i].has_value());
                CHECK(md.line_pages[i]->start >= last);
                last = md.line_pages[i]->start;
            }
            if (lines[i].rfind("#", 0) == 0) ++atx;
        }
        CHECK(atx == headings.size() + (title ? 1 : 0));
        // Every span text survives exactly once.
        for (const auto& s : spans) {
            const auto first = md.text.find(s.text);
            REQUIRE(first != std::string::npos);
            CHECK(md.text.find(s.text, first + 1) == std::string::npos);
        }
    }
}
