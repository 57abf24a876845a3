#include <random>
#include <set>

#include "chunkwise/errors.hpp"
#include "chunkwise/pdf/extract.hpp"
#include "chunkwise/tables.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chunkwise;
using testsupport::span;

namespace {

std::vector<DrawSegment> lattice(int page, std::vector<double> xs, std::vector<double> ys) {
    std::vector<DrawSegment> out;
    for (double x : xs) out.push_back({page, {x, ys.front()}, {x, ys.back()}, 0.5});
    for (double y : ys) out.push_back({page, {xs.front(), y}, {xs.back(), y}, 0.5});
    return out;
}

// Lattice drawn edge by edge, skipping the listed interior edges.
std::vector<DrawSegment> piecewise(const std::vector<double>& xs, const std::vector<double>& ys,
                                   const std::set<std::pair<int, int>>& skip_h, const std::set<std::pair<int, int>>& skip_v) {
    std::vector<DrawSegment> out;
    for (std::size_t i = 0; i < ys.size(); ++i)
        for (std::size_t j = 0; j + 1 < xs.size(); ++j)
            if (!skip_h.count({static_cast<int>(i), static_cast<int>(j)}))
                out.push_back({0, {xs[j], ys[i]}, {xs[j + 1], ys[i]}, 0.5});
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (!skip_v.count({static_cast<int>(i), static_cast<int>(j)}))
                out.push_back({0, {xs[j], ys[i]}, {xs[j], ys[i + 1]}, 0.5});
    return out;
}

int tiled_area(const std::vector<TableCell>& cells) {
    int area = 0;
    for (const auto& c : cells) area += c.row_span * c.col_span;
    return area;
}

bool no_overlap(const std::vector<TableCell>& cells, int rows, int cols) {
    std::vector<int> seen(rows * cols, 0);
    for (const auto& c : cells)
        for (int r = c.row; r < c.row + c.row_span; ++r)
            for (int k = c.col; k < c.col + c.col_span; ++k) {
                if (r >= rows || k >= cols) return false;
                if (seen[r * cols + k]++) return false;
            }
    return true;
}

}  // namespace

TEST_CASE("minimal lattice") {
    const auto grids = detect_grids(lattice(0, {100, 200, 300}, {100, 120, 140}));
    REQUIRE(grids.size() == 1);
    CHECK(grids[0].rows() == 2);
    CHECK(grids[0].cols() == 2);
}

TEST_CASE("parallel rules alone are not a grid") {
    CHECK(detect_grids({{0, {100, 100}, {300, 100}, 1}, {0, {100, 120}, {300, 120}, 1}}).empty());
}

TEST_CASE("a single box frame is not a table") {
    CHECK(detect_grids(lattice(0, {100, 300}, {100, 200})).empty());
}

TEST_CASE("two separate lattices") {
    auto segs = lattice(0, {100, 150, 200}, {100, 120, 140});
    const auto right = lattice(0, {400, 450, 500}, {100, 120, 140});
    segs.insert(segs.end(), right.begin(), right.end());
    const auto grids = detect_grids(segs);
    REQUIRE(grids.size() == 2);
    CHECK(grids[0].xs.front() == 100);
    CHECK(grids[1].xs.front() == 400);
}

TEST_CASE("lattices on different pages stay apart") {
    auto segs = lattice(0, {100, 150, 200}, {100, 120, 140});
    const auto other = lattice(1, {100, 150, 200}, {100, 120, 140});
    segs.insert(segs.end(), other.begin(), other.end());
    const auto grids = detect_grids(segs);
    REQUIRE(grids.size() == 2);
    CHECK(grids[1].page == 1);
}

TEST_CASE("piecewise rules chain and snap") {
    std::vector<DrawSegment> segs;
    // Horizontal rules drawn as two pieces with a 1pt gap and a 1pt wobble.
    for (double y : {100.0, 120.0, 140.0}) {
        segs.push_back({0, {100, y}, {199, y}, 0.5});
        segs.push_back({0, {200, y + 1}, {300, y + 1}, 0.5});
    }
    for (double x : {100.0, 200.0, 300.0}) segs.push_back({0, {x, 100}, {x, 141}, 0.5});
    const auto grids = detect_grids(segs);
    REQUIRE(grids.size() == 1);
    CHECK(grids[0].ys.size() == 3);
    for (const auto& row : grids[0].h_edges)
        for (bool e : row) CHECK(e);
}

TEST_CASE("full lattice with one span per cell") {
    const Grid g = detect_grids(lattice(0, {100, 200, 300}, {100, 120, 140})).at(0);
    const std::vector<Span> spans = {span(0, 110, 115, "A"), span(0, 210, 115, "B"), span(0, 110, 135, "1"),
                                     span(0, 210, 135, "2"), span(0, 400, 135, "outside")};
    const auto cells = extract_cells(g, spans);
    REQUIRE(cells.size() == 4);
    for (const auto& c : cells) CHECK((c.row_span == 1 && c.col_span == 1));
    CHECK(cells[0].text == "A");
    CHECK(cells[3].text == "2");
    CHECK(render_table(cells, g) == "| A | B |\n| --- | --- |\n| 1 | 2 |");
}

TEST_CASE("missing interior vertical edge merges the top row") {
    const std::vector<double> xs{100, 200, 300}, ys{100, 120, 140};
    const Grid g = detect_grids(piecewise(xs, ys, {}, {{0, 1}})).at(0);
    CHECK_FALSE(g.v_edges[0][1]);
    const auto cells = extract_cells(g, {span(0, 180, 115, "Title"), span(0, 110, 135, "1"), span(0, 210, 135, "2")});
    REQUIRE(cells.size() == 3);
    CHECK(cells[0] == TableCell{0, 0, 1, 2, "Title"});
    CHECK(tiled_area(cells) == 4);
    CHECK(render_table(cells, g).substr(0, 13) == "| Title |  |\n");
}

TEST_CASE("non-rectangular merge") {
    // 2x2 grid with both edges around the bottom-right cell missing: an L-shaped region.
    const std::vector<double> xs{100, 200, 300}, ys{100, 120, 140};
    const Grid g = detect_grids(piecewise(xs, ys, {{1, 1}}, {{1, 1}})).at(0);
    CHECK_THROWS_AS(extract_cells(g, {}, true), Error);
    try {
        extract_cells(g, {}, true);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentLattice);
    }
    const auto cells = extract_cells(g, {});
    CHECK(cells.size() == 4);
    CHECK(tiled_area(cells) == 4);
}

TEST_CASE("cell text escaping") {
    Grid g;
    g.xs = {0, 10};
    g.ys = {0, 10, 20};
    const std::vector<TableCell> cells = {{0, 0, 1, 1, "a|b"}, {1, 0, 1, 1, "x\ny"}};
    const std::string md = render_table(cells, g);
    CHECK(md == "| a\\|b |\n| --- |\n| x<br>y |");
    const auto back = parse_pipe_table(md);
    CHECK(back == std::vector<std::vector<std::string>>{{"a|b"}, {"x\ny"}});
}

TEST_CASE("tiling, round trip and snap stability on random lattices") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int iter = 0; iter < 300; ++iter) {
        const int ncols = std::uniform_int_distribution<int>(2, 6)(rng);
        const int nrows = std::uniform_int_distribution<int>(2, 8)(rng);
        std::vector<double> xs{72}, ys{100};
        for (int i = 0; i < ncols; ++i) xs.push_back(xs.back() + std::uniform_int_distribution<int>(30, 120)(rng));
        for (int i = 0; i < nrows; ++i) ys.push_back(ys.back() + std::uniform_int_distribution<int>(14, 40)(rng));

        // Full lattice: render then parse recovers the text matrix.
        std::vector<Span> spans;
        std::vector<std::vector<std::string>> expected(nrows, std::vector<std::string>(ncols));
        for (int r = 0; r < nrows; ++r)
            for (int c = 0; c < ncols; ++c) {
                std::string t = testsupport::random_word(rng);
                if (coin(rng) == 0) t += "|x";
                expected[r][c] = t;
                spans.push_back(span(0, xs[c] + 3, ys[r + 1] - 3, t, 6));
            }
        const auto full = piecewise(xs, ys, {}, {});
        const auto grids = detect_grids(full);
        REQUIRE(grids.size() == 1);
        const auto cells = extract_cells(grids[0], spans);
        CHECK(parse_pipe_table(render_table(cells, grids[0])) == expected);

        // Random interior edges removed: result still tiles.
        std::set<std::pair<int, int>> skip_h, skip_v;
        for (int i = 1; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j)
                if (coin(rng) == 0) skip_h.insert({i, j});
        for (int i = 0; i < nrows; ++i)
            for (int j = 1; j < ncols; ++j)
                if (coin(rng) == 0) skip_v.insert({i, j});
        const auto segs = piecewise(xs, ys, skip_h, skip_v);
        const auto merged = detect_grids(segs);
        // Dropping every interior rule of one axis leaves a single row or column.
        if (merged.empty()) continue;
        REQUIRE(merged.size() == 1);
        const Grid& g = merged[0];
        // A fully removed interior rule removes that boundary from the lattice.
        CHECK(g.rows() <= nrows);
        CHECK(g.cols() <= ncols);
        const auto mcells = extract_cells(g, spans);
        CHECK(tiled_area(mcells) == g.rows() * g.cols());
        CHECK(no_overlap(mcells, g.rows(), g.cols()));

        // Perturb every endpoint by up to 0.5pt.
        std::uniform_real_distribution<double> jitter(-0.5, 0.5);
        auto moved = segs;
        for (auto& s : moved) {
            s.p0.x += jitter(rng);
            s.p0.y += jitter(rng);
            s.p1.x += jitter(rng);
            s.p1.y += jitter(rng);
        }
        // Keep axis alignment within the snap tolerance after jitter.
        const auto jg = detect_grids(moved);
        REQUIRE(jg.size() == 1);
        CHECK(jg[0].h_edges == g.h_edges);
        CHECK(jg[0].v_edges == g.v_edges);
        REQUIRE(jg[0].xs.size() == g.xs.size());
        REQUIRE(jg[0].ys.size() == g.ys.size());
        for (std::size_t i = 0; i < g.xs.size(); ++i) CHECK(std::abs(jg[0].xs[i] - g.xs[i]) <= 0.5);
        for (std::size_t i = 0; i < g.ys.size(); ++i) CHECK(std::abs(jg[0].ys[i] - g.ys[i]) <= 0.5);
    }
}

TEST_CASE("reportlab ruled table") {
    const RawDocument doc = extract_raw(std::string(CHUNKWISE_TEST_DATA) + "/pdf/table.pdf");
    std::vector<bool> consumed;
    const auto tables = extract_tables(doc, consumed);
    REQUIRE(tables.size() == 1);
    CHECK(tables[0].markdown == "| Name | Value |\n| --- | --- |\n| alpha | 1 |");
    for (bool c : consumed) CHECK(c);
}
