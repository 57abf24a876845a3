#pragma once

#include <string>
#include <vector>

#include "chunkwise/raw_document.hpp"

namespace chunkwise {

struct TableConfig {
    // Coordinates within this distance snap together; collinear pieces with gaps up to it chain.
    double snap_tolerance = 2.0;
};

/// Ruling-line lattice. h_edges[i][j] is the horizontal edge on ys[i] between xs[j] and xs[j+1];
/// v_edges[i][j] is the vertical edge on xs[j] between ys[i] and ys[i+1].
struct Grid {
    int page = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<bool>> h_edges;
    std::vector<std::vector<bool>> v_edges;

    int rows() const { return static_cast<int>(ys.size()) - 1; }
    int cols() const { return static_cast<int>(xs.size()) - 1; }
    Rect bbox() const { return {xs.front(), ys.front(), xs.back(), ys.back()}; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct TableCell {
    int row = 0;
    int col = 0;
    int row_span = 1;
    int col_span = 1;
    std::string text;

    friend bool operator==(const TableCell&, const TableCell&) = default;
};

struct Table {
    Grid grid;
    std::vector<TableCell> cells;
    std::string markdown;
};

std::vector<Grid> detect_grids(const std::vector<DrawSegment>& segments, const TableConfig& cfg = {});

/// Cells in row-major order of their top-left unit cell. A merge that yields a
/// non-rectangular region throws InconsistentLattice when `strict`, otherwise
/// that region's unit cells are kept unmerged.
std::vector<TableCell> extract_cells(const Grid& grid, const std::vector<Span>& spans, bool strict = false);

std::string render_table(const std::vector<TableCell>& cells, const Grid& grid);

/// Cell-text matrix of a pipe table, separator row dropped and escapes undone.
std::vector<std::vector<std::string>> parse_pipe_table(const std::string& markdown);

/// Detects every grid of the document and fills it. `consumed[i]` is set for
/// each span whose center falls inside a table.
std::vector<Table> extract_tables(const RawDocument& doc, std::vector<bool>& consumed, const TableConfig& cfg = {});

}  // namespace chunkwise
