#include <random>

#include "chunker_properties.hpp"
#include "chunkwise/errors.hpp"
#include "chunkwise/chunker.hpp"
#include "doctest.h"

using namespace chunkwise;

namespace {

std::string words(int n, const std::string& w = "word") {
    std::string s;
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + w;
    return s;
}

// Lines of `per_line` words totalling n words.
std::string lines_of(int n, int per_line = 10) {
    std::string s;
    while (n > 0) {
        const int k = std::min(n, per_line);
        s += words(k) + "\n";
        n -= k;
    }
    return s;
}

}  // namespace

TEST_CASE("toc tree nesting") {
    auto root = build_toc_tree(markdown_from_text("# A\ntext\n## B\ntext2"));
    REQUIRE(root.children.size() == 1);
    const TocNode& a = root.children[0];
    CHECK(a.heading == "# A");
    CHECK(a.content_begin == 1);
    CHECK(a.content_end == 2);
    REQUIRE(a.children.size() == 1);
    CHECK(a.children[0].heading == "## B");
    CHECK(a.children[0].content_begin == 3);
    CHECK(a.children[0].end == 4);

    root = build_toc_tree(markdown_from_text("just\nlines"));
    CHECK(root.children.empty());
    CHECK(root.content_end == 2);

    root = build_toc_tree(markdown_from_text("# A\n### C"));
    REQUIRE(root.children.size() == 1);
    REQUIRE(root.children[0].children.size() == 1);
    CHECK(root.children[0].children[0].heading == "### C");
}

TEST_CASE("headings inside fenced code are ignored") {
    const auto root = build_toc_tree(markdown_from_text("# A\n```\n# not heading\n```\n## B\nx"));
    REQUIRE(root.children.size() == 1);
    REQUIRE(root.children[0].children.size() == 1);
    CHECK(root.children[0].children[0].heading == "## B");
}

TEST_CASE("small section stays intact") {
    const ChunkerConfig cfg;
    const auto md = markdown_from_text("# S\n" + lines_of(100));
    const auto chunks = chunk_markdown(md, cfg);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].word_count == 100);
    CHECK(chunks[0].parent_headers == std::vector<std::string>{"# S"});
    CHECK(chunks[0].text.rfind("# S\n\n", 0) == 0);
}

TEST_CASE("oversized section recurses into subsections") {
    // 600 words in total: no own content beyond a 0-word preamble split, two 300-word children.
    const ChunkerConfig cfg{250, 400, 15};
    const auto md = markdown_from_text("# P\n" + lines_of(20) + "## C1\n" + lines_of(290) + "## C2\n" + lines_of(290));
    const auto chunks = chunk_markdown(md, cfg);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].word_count == 20);
    CHECK(chunks[0].parent_headers == std::vector<std::string>{"# P"});
    CHECK(chunks[1].parent_headers == std::vector<std::string>{"# P", "## C1"});
    CHECK(chunks[1].word_count == 290);
    CHECK(chunks[2].word_count == 290);
}

TEST_CASE("empty parent yields no content chunk") {
    const ChunkerConfig cfg{50, 400, 15};
    const auto md = markdown_from_text("# A\n\n## B\n" + lines_of(200));
    const auto chunks = chunk_markdown(md, cfg);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].parent_headers == std::vector<std::string>{"# A", "## B"});
    CHECK(chunks[0].start_line == 3);
}

TEST_CASE("hard split packs lines greedily") {
    const ChunkerConfig cfg{250, 400, 15};
    const auto md = markdown_from_text("# S\n" + lines_of(900));
    const auto chunks = chunk_markdown(md, cfg);
    REQUIRE(chunks.size() == 3);
    for (const auto& c : chunks) {
        CHECK(c.word_count <= 400);
        CHECK(c.parent_headers == std::vector<std::string>{"# S"});
    }
    CHECK(chunks[0].word_count == 400);
    CHECK(chunks[1].word_count == 400);
    CHECK(chunks[2].word_count == 100);
    CHECK(chunks[1].start_line == 41);
}

TEST_CASE("tables stay whole") {
    const ChunkerConfig cfg{250, 400, 15};
    std::string table = "| h1 | h2 |\n| --- | --- |\n";
    for (int i = 0; i < 45; ++i) table += "| " + words(5) + " | " + words(5) + " |\n";
    const auto md = markdown_from_text("# S\n" + lines_of(50) + table);
    const auto chunks = chunk_markdown(md, cfg);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].word_count == 50);
    CHECK(chunks[1].content().rfind("| h1 | h2 |", 0) == 0);
    CHECK(chunks[1].word_count > 400);
}

TEST_CASE("chunks under the hard limit are untouched") {
    Chunk c;
    c.text = words(300);
    c.word_count = 300;
    const auto out = hard_split(c, ChunkerConfig{});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == c);
}

TEST_CASE("minimum word filter") {
    const ChunkerConfig cfg{250, 400, 15};
    Chunk five, fifteen;
    five.word_count = 5;
    fifteen.word_count = 15;
    const auto out = filter_min_words({five, fifteen}, cfg);
    REQUIRE(out.size() == 1);
    CHECK(out[0].word_count == 15);
    CHECK(filter_min_words({}, cfg).empty());
}

TEST_CASE("page attachment") {
    MarkdownDoc md;
    md.text = "# T\n\n" + words(20) + "\n\n" + words(20);
    md.line_pages = {PageRange{2, 2}, std::nullopt, PageRange{2, 2}, std::nullopt, PageRange{3, 3}};
    auto chunks = chunk_markdown(md, ChunkerConfig{});
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].start_page == 2);
    CHECK(chunks[0].end_page == 3);

    chunks = chunk_markdown(markdown_from_text(words(20)), ChunkerConfig{});
    REQUIRE(chunks.size() == 1);
    CHECK_FALSE(chunks[0].start_page.has_value());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((ChunkerConfig{250, 200, 15}.validate()), Error);
    CHECK_THROWS_AS((ChunkerConfig{250, 400, 0}.validate()), Error);
    CHECK_THROWS_AS((ChunkerConfig{15, 400, 15}.validate()), Error);
    CHECK_NOTHROW(ChunkerConfig{}.validate());
}

TEST_CASE("jsonl record shape") {
    Chunk c;
    c.text = "# A\n\nbody";
    c.parent_headers = {"# A"};
    c.start_line = 2;
    c.word_count = 1;
    c.doc_id = "doc";
    CHECK(chunk_json_line(c) ==
          R"({"text":"# A\n\nbody","headers":["# A"],"start_line":2,"start_page":null,"end_page":null,"word_count":1,"doc_id":"doc"})");
}

TEST_CASE("chunker properties on random markdown") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 300; ++i) {
        const auto md = markdown_from_text(testsupport::random_markdown(rng));
        const auto cfg = testsupport::random_config(rng);
        const auto errors = testsupport::chunker_violations(md, cfg);
        if (!errors.empty()) {
            INFO("markdown: " << md.text);
            FAIL_CHECK(errors.front());
        }
    }
}
