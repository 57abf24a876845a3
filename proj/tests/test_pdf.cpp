#include <filesystem>
#include <fstream>
#include <sstream>

#include "chunkwise/errors.hpp"
#include "chunkwise/pdf/extract.hpp"
#include "chunkwise/pdf/writer.hpp"
#include "doctest.h"
#include "pdf/filters.hpp"

using namespace chunkwise;
namespace fs = std::filesystem;

static fs::path data(const char* name) { return fs::path(CHUNKWISE_TEST_DATA) / "pdf" / name; }

TEST_CASE("reportlab hello page yields one 12pt span") {
    const RawDocument doc = extract_raw(data("hello.pdf"));
    REQUIRE(doc.page_count == 1);
    REQUIRE(doc.spans.size() == 1);
    CHECK(doc.spans[0].text == "Hello");
    CHECK(doc.spans[0].font_size == doctest::Approx(12.0));
    CHECK(doc.spans[0].font_name == "Helvetica");
    // drawString(72, 720) on a 792pt page puts the baseline at y = 72 from the top.
    CHECK(doc.spans[0].bbox.x0 == doctest::Approx(72.0));
    CHECK(doc.spans[0].bbox.y1 == doctest::Approx(72.0).epsilon(0.05));
    // Helvetica widths: H 722, e 556, l 222, l 222, o 556 = 2278 units.
    CHECK(doc.spans[0].bbox.x1 == doctest::Approx(72.0 + 2278 * 12 / 1000.0));
    CHECK_FALSE(doc.toc.has_value());
}

TEST_CASE("empty page") {
    const RawDocument doc = extract_raw(data("empty.pdf"));
    CHECK(doc.page_count == 1);
    CHECK(doc.spans.empty());
    CHECK(doc.segments.empty());
    CHECK(doc.links.empty());
    CHECK_FALSE(doc.toc.has_value());
}

TEST_CASE("outline entries become toc with zero-based pages") {
    const RawDocument doc = extract_raw(data("outline.pdf"));
    REQUIRE(doc.toc.has_value());
    REQUIRE(doc.toc->size() == 2);
    CHECK((*doc.toc)[0] == TocEntry{"Intro", 1, 0});
    CHECK((*doc.toc)[1] == TocEntry{"Details", 2, 1});
    REQUIRE(doc.spans.size() == 2);
    CHECK(doc.spans[0].bold);
    CHECK_FALSE(doc.spans[1].bold);
}

TEST_CASE("encrypted file is rejected") {
    try {
        extract_raw(data("encrypted.pdf"));
        FAIL("expected EncryptedPdf");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EncryptedPdf);
    }
}

TEST_CASE("missing file") {
    try {
        extract_raw(data("nope.pdf"));
        FAIL("expected FileNotFound");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FileNotFound);
    }
}

TEST_CASE("garbage bytes are malformed") {
    try {
        extract_raw_from_bytes("this is not a pdf at all");
        FAIL("expected MalformedPdf");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedPdf);
    }
}

TEST_CASE("link annotations and style flags") {
    const RawDocument doc = extract_raw(data("links.pdf"));
    REQUIRE(doc.links.size() == 1);
    CHECK(doc.links[0].uri == "https://example.org");
    CHECK(doc.links[0].bbox.y0 == doctest::Approx(792 - 732));
    REQUIRE(doc.spans.size() == 3);
    CHECK(doc.spans[1].italic);
    CHECK(doc.spans[2].mono);
}

TEST_CASE("ruling lines come back as segments") {
    const RawDocument doc = extract_raw(data("table.pdf"));
    CHECK(doc.segments.size() == 6);
    CHECK(doc.spans.size() == 4);
    for (const auto& s : doc.segments) {
        const bool horizontal = s.p0.y == doctest::Approx(s.p1.y);
        const bool vertical = s.p0.x == doctest::Approx(s.p1.x);
        CHECK((horizontal || vertical));
    }
}

TEST_CASE("writer round trip") {
    pdf::Writer w;
    const int p = w.add_page();
    w.text(p, 72, 100, "Title text", pdf::Face::HelveticaBold, 20);
    w.text(p, 72, 140, "Body caf\xC3\xA9 line", pdf::Face::TimesRoman, 11);
    w.line(p, {72, 200}, {300, 200}, 1.0);
    w.link(p, {72, 126, 150, 142}, "https://x");
    const int q = w.add_page();
    w.text(q, 72, 100, "Second", pdf::Face::Courier, 9);
    w.outline("Title text", 1, 0);
    w.outline("Sub", 2, 1);
    w.outline("Other", 1, 1);

    const RawDocument doc = extract_raw_from_bytes(w.bytes());
    REQUIRE(doc.page_count == 2);
    REQUIRE(doc.spans.size() == 3);
    CHECK(doc.spans[0].text == "Title text");
    CHECK(doc.spans[0].bold);
    CHECK(doc.spans[0].font_size == doctest::Approx(20));
    CHECK(doc.spans[0].bbox.x1 ==
          doctest::Approx(72 + pdf::Writer::text_width("Title text", pdf::Face::HelveticaBold, 20)));
    CHECK(doc.spans[1].text == "Body caf\xC3\xA9 line");
    CHECK(doc.spans[2].page == 1);
    CHECK(doc.spans[2].mono);
    REQUIRE(doc.segments.size() == 1);
    CHECK(doc.segments[0].p0.y == doctest::Approx(200));
    REQUIRE(doc.links.size() == 1);
    CHECK(doc.links[0].bbox.y0 == doctest::Approx(126));
    REQUIRE(doc.toc.has_value());
    REQUIRE(doc.toc->size() == 3);
    CHECK((*doc.toc)[1] == TocEntry{"Sub", 2, 1});
    CHECK((*doc.toc)[2] == TocEntry{"Other", 1, 1});
}

TEST_CASE("extraction is deterministic") {
    pdf::Writer w(false);
    const int p = w.add_page();
    for (int i = 0; i < 30; ++i) w.text(p, 72 + (i % 3) * 150, 60 + i * 20, "word " + std::to_string(i), pdf::Face::Helvetica, 10);
    const std::string bytes = w.bytes();
    CHECK(extract_raw_from_bytes(bytes) == extract_raw_from_bytes(bytes));
}

TEST_CASE("spans sorted by page then y then x") {
    pdf::Writer w;
    const int p = w.add_page();
    w.text(p, 300, 100, "right", pdf::Face::Helvetica, 10);
    w.text(p, 72, 300, "low", pdf::Face::Helvetica, 10);
    w.text(p, 72, 100, "left", pdf::Face::Helvetica, 10);
    const RawDocument doc = extract_raw_from_bytes(w.bytes());
    REQUIRE(doc.spans.size() == 3);
    CHECK(doc.spans[0].text == "left");
    CHECK(doc.spans[1].text == "right");
    CHECK(doc.spans[2].text == "low");
}

TEST_CASE("broken xref offsets are reconstructed") {
    pdf::Writer w(false);
    const int p = w.add_page();
    w.text(p, 72, 100, "Recovered", pdf::Face::Helvetica, 10);
    std::string bytes = w.bytes();
    const auto pos = bytes.rfind("startxref");
    bytes.replace(pos, std::string::npos, "startxref\n999999\n%%EOF\n");
    const RawDocument doc = extract_raw_from_bytes(bytes);
    REQUIRE(doc.spans.size() == 1);
    CHECK(doc.spans[0].text == "Recovered");
}

TEST_CASE("filters") {
    CHECK(pdf::ascii_hex_decode("48656C6C6F>") == "Hello");
    CHECK(pdf::ascii_hex_decode("4865 6C6C 6>") == "Hel\x6C\x60");
    CHECK(pdf::ascii85_decode("87cURD]i,\"Ebo7~>") == "Hello World");
    CHECK(pdf::ascii85_decode("z~>") == std::string(4, '\0'));
    CHECK(pdf::run_length_decode(std::string("\x02" "abc" "\xFE" "z" "\x80", 7)) == "abczzz");
    CHECK(pdf::flate_decode(pdf::flate_encode("round trip payload")) == "round trip payload");
    // LZW sample from the format reference: 8-bit codes for "-----A---B".
    const unsigned char lzw[] = {0x80, 0x0B, 0x60, 0x50, 0x22, 0x0C, 0x0C, 0x85, 0x01};
    CHECK(pdf::lzw_decode(std::string(reinterpret_cast<const char*>(lzw), sizeof lzw), true) == "-----A---B");
}
