#include <filesystem>
#include <iostream>
#include <unistd.h>

#include "conformance.hpp"
#include "doctest.h"

namespace {

const std::vector<conformance::Result>& results() {
    static const auto r = [] {
        const auto path = std::filesystem::temp_directory_path() / ("chunkwise_conf_" + std::to_string(::getpid()) + ".pdf");
        conformance::write_pdf(path);
        auto out = conformance::check(path);
        std::filesystem::remove(path);
        return out;
    }();
    return r;
}

bool passed(const std::string& feature) {
    for (const auto& r : results())
        if (r.feature == feature) return r.passed;
    return false;
}

}  // namespace

TEST_CASE("text extraction with font styling") { CHECK(passed("text extraction with font styling")); }
TEST_CASE("paragraph recombination") { CHECK(passed("paragraph recombination")); }
TEST_CASE("line-vector tables") { CHECK(passed("line-vector tables")); }
TEST_CASE("merged cells") { CHECK(passed("merged cells")); }
TEST_CASE("link extraction") { CHECK(passed("link extraction")); }
TEST_CASE("section headers with hierarchy") { CHECK(passed("section headers with hierarchy")); }
TEST_CASE("header/footer removal") { CHECK(passed("header/footer removal")); }
TEST_CASE("built-in chunking") { CHECK(passed("built-in chunking")); }
