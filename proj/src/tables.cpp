#include "chunkwise/tables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chunkwise/errors.hpp"
#include "chunkwise/layout.hpp"

namespace chunkwise {

namespace {

struct Rule {
    double at;  // y for horizontal, x for vertical
    double lo;
    double hi;
};

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Single-linkage clusters of sorted values; returns each value's cluster mean.
std::vector<double> snap(const std::vector<double>& values, double tol) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> out(values.size());
    std::size_t start = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        if (i == order.size() || values[order[i]] - values[order[i - 1]] > tol) {
            double sum = 0;
            for (std::size_t k = start; k < i; ++k) sum += values[order[k]];
            const double mean = sum / static_cast<double>(i - start);
            for (std::size_t k = start; k < i; ++k) out[order[k]] = mean;
            start = i;
        }
    }
    return out;
}

// Snaps the fixed coordinate and chains collinear pieces into maximal rules.
std::vector<Rule> build_rules(std::vector<Rule> pieces, double tol) {
    std::vector<double> at;
    for (const auto& p : pieces) at.push_back(p.at);
    const auto snapped = snap(at, tol);
    for (std::size_t i = 0; i < pieces.size(); ++i) pieces[i].at = snapped[i];
    std::sort(pieces.begin(), pieces.end(), [](const Rule& a, const Rule& b) {
        return a.at != b.at ? a.at < b.at : a.lo < b.lo;
    });
    std::vector<Rule> rules;
    for (const auto& p : pieces) {
        if (!rules.empty() && rules.back().at == p.at && p.lo <= rules.back().hi + tol) {
            rules.back().hi = std::max(rules.back().hi, p.hi);
        } else {
            rules.push_back(p);
        }
    }
    return rules;
}

bool crosses(const Rule& h, const Rule& v, double tol) {
    return v.at >= h.lo - tol && v.at <= h.hi + tol && h.at >= v.lo - tol && h.at <= v.hi + tol;
}

std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Grid> grids_on_page(int page, const std::vector<Rule>& hs, const std::vector<Rule>& vs, double tol) {
    const int nh = static_cast<int>(hs.size());
    const int n = nh + static_cast<int>(vs.size());
    DisjointSet ds(n);
    for (int i = 0; i < nh; ++i)
        for (std::size_t j = 0; j < vs.size(); ++j)
            if (crosses(hs[i], vs[j], tol)) ds.unite(i, nh + static_cast<int>(j));

    std::map<int, std::vector<int>> components;
    for (int i = 0; i < n; ++i) components[ds.find(i)].push_back(i);

    std::vector<Grid> grids;
    for (const auto& [root, members] : components) {
        std::vector<Rule> ch, cv;
        for (int m : members) (m < nh ? ch : cv).push_back(m < nh ? hs[m] : vs[m - nh]);
        std::vector<double> ys, xs;
        for (const auto& r : ch) ys.push_back(r.at);
        for (const auto& r : cv) xs.push_back(r.at);
        ys = distinct(ys);
        xs = distinct(xs);
        if (ys.size() < 3 || xs.size() < 3) continue;

        int intersections = 0;
        for (double y : ys)
            for (double x : xs) {
                const bool on_h = std::any_of(ch.begin(), ch.end(), [&](const Rule& r) {
                    return r.at == y && x >= r.lo - tol && x <= r.hi + tol;
                });
                const bool on_v = std::any_of(cv.begin(), cv.end(), [&](const Rule& r) {
                    return r.at == x && y >= r.lo - tol && y <= r.hi + tol;
                });
                if (on_h && on_v) ++intersections;
            }
        if (intersections < 4) continue;

        Grid g;
        g.page = page;
        g.xs = xs;
        g.ys = ys;
        g.h_edges.assign(ys.size(), std::vector<bool>(xs.size() - 1, false));
        g.v_edges.assign(ys.size() - 1, std::vector<bool>(xs.size(), false));
        for (std::size_t i = 0; i < ys.size(); ++i)
            for (std::size_t j = 0; j + 1 < xs.size(); ++j)
                g.h_edges[i][j] = std::any_of(ch.begin(), ch.end(), [&](const Rule& r) {
                    return r.at == ys[i] && r.lo <= xs[j] + tol && r.hi >= xs[j + 1] - tol;
                });
        for (std::size_t i = 0; i + 1 < ys.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j)
                g.v_edges[i][j] = std::any_of(cv.begin(), cv.end(), [&](const Rule& r) {
                    return r.at == xs[j] && r.lo <= ys[i] + tol && r.hi >= ys[i + 1] - tol;
                });
        grids.push_back(std::move(g));
    }
    std::sort(grids.begin(), grids.end(), [](const Grid& a, const Grid& b) {
        return a.ys.front() != b.ys.front() ? a.ys.front() < b.ys.front() : a.xs.front() < b.xs.front();
    });
    return grids;
}

std::string escape_cell(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += "<br>";
        else out += c;
    }
    return out;
}

std::string unescape_cell(const std::string& text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == '|') {
            out += '|';
            ++i;
        } else if (text.compare(i, 4, "<br>") == 0) {
            out += '\n';
            i += 3;
        } else {
            out += text[i];
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(' ');
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(' ') - b + 1);
}

}  // namespace

std::vector<Grid> detect_grids(const std::vector<DrawSegment>& segments, const TableConfig& cfg) {
    const double tol = cfg.snap_tolerance;
    std::map<int, std::pair<std::vector<Rule>, std::vector<Rule>>> per_page;
    for (const auto& s : segments) {
        const double dx = std::abs(s.p1.x - s.p0.x);
        const double dy = std::abs(s.p1.y - s.p0.y);
        if (dx <= tol && dy <= tol) continue;
        auto& [hs, vs] = per_page[s.page];
        if (dy <= tol) {
            hs.push_back({(s.p0.y + s.p1.y) / 2, std::min(s.p0.x, s.p1.x), std::max(s.p0.x, s.p1.x)});
        } else if (dx <= tol) {
            vs.push_back({(s.p0.x + s.p1.x) / 2, std::min(s.p0.y, s.p1.y), std::max(s.p0.y, s.p1.y)});
        }
    }
    std::vector<Grid> grids;
    for (auto& [page, rules] : per_page) {
        const auto hs = build_rules(rules.first, tol);
        const auto vs = build_rules(rules.second, tol);
        for (auto& g : grids_on_page(page, hs, vs, tol)) grids.push_back(std::move(g));
    }
    return grids;
}

std::vector<TableCell> extract_cells(const Grid& grid, const std::vector<Span>& spans, bool strict) {
    const int rows = grid.rows();
    const int cols = grid.cols();
    auto id = [cols](int r, int c) { return r * cols + c; };
    DisjointSet ds(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols && !grid.v_edges[r][c + 1]) ds.unite(id(r, c), id(r, c + 1));
            if (r + 1 < rows && !grid.h_edges[r + 1][c]) ds.unite(id(r, c), id(r + 1, c));
        }

    struct Region {
        int r0 = 1 << 30, c0 = 1 << 30, r1 = -1, c1 = -1, count = 0;
    };
    std::map<int, Region> regions;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            Region& g = regions[ds.find(id(r, c))];
            g.r0 = std::min(g.r0, r);
            g.c0 = std::min(g.c0, c);
            g.r1 = std::max(g.r1, r);
            g.c1 = std::max(g.c1, c);
            ++g.count;
        }

    std::vector<TableCell> cells;
    for (const auto& [root, g] : regions) {
        const int area = (g.r1 - g.r0 + 1) * (g.c1 - g.c0 + 1);
        if (area == g.count) {
            cells.push_back({g.r0, g.c0, g.r1 - g.r0 + 1, g.c1 - g.c0 + 1, ""});
            continue;
        }
        if (strict) {
            throw Error(ErrorCode::InconsistentLattice, "merged region at row " + std::to_string(g.r0) + ", col " +
                                                            std::to_string(g.c0) + " is not rectangular");
        }
        for (int r = g.r0; r <= g.r1; ++r)
            for (int c = g.c0; c <= g.c1; ++c)
                if (ds.find(id(r, c)) == root) cells.push_back({r, c, 1, 1, ""});
    }
    std::sort(cells.begin(), cells.end(), [](const TableCell& a, const TableCell& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    for (auto& cell : cells) {
        const Rect box{grid.xs[cell.col], grid.ys[cell.row], grid.xs[cell.col + cell.col_span],
                       grid.ys[cell.row + cell.row_span]};
        std::vector<Span> inside;
        for (const auto& s : spans)
            if (s.page == grid.page && box.contains(s.bbox.center())) inside.push_back(s);
        if (inside.empty()) continue;
        std::string text;
        for (const auto& line : assemble_lines(inside)) {
            if (!text.empty()) text += ' ';
            text += line.text();
        }
        cell.text = text;
    }
    return cells;
}

std::string render_table(const std::vector<TableCell>& cells, const Grid& grid) {
    const int rows = grid.rows();
    const int cols = grid.cols();
    std::vector<std::vector<std::string>> m(rows, std::vector<std::string>(cols));
    for (const auto& c : cells) m.at(c.row).at(c.col) = escape_cell(c.text);
    auto row_line = [](const std::vector<std::string>& row) {
        std::string line = "|";
        for (const auto& cell : row) line += " " + cell + " |";
        return line;
    };
    std::string out = row_line(m[0]) + "\n|";
    for (int c = 0; c < cols; ++c) out += " --- |";
    for (int r = 1; r < rows; ++r) out += "\n" + row_line(m[r]);
    return out;
}

std::vector<std::vector<std::string>> parse_pipe_table(const std::string& markdown) {
    std::vector<std::vector<std::string>> out;
    std::size_t pos = 0;
    int index = 0;
    while (pos <= markdown.size()) {
        auto end = markdown.find('\n', pos);
        if (end == std::string::npos) end = markdown.size();
        const std::string line = trim(markdown.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        if (index++ == 1) continue;  // separator row
        std::vector<std::string> cells;
        std::string cur;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '\\' && i + 1 < line.size() && line[i + 1] == '|') {
                cur += "\\|";
                ++i;
            } else if (line[i] == '|') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += line[i];
            }
        }
        cells.push_back(cur);
        // Leading and trailing pipes leave empty outer pieces.
        if (!cells.empty() && trim(cells.front()).empty()) cells.erase(cells.begin());
        if (!cells.empty() && trim(cells.back()).empty()) cells.pop_back();
        for (auto& c : cells) c = unescape_cell(trim(c));
        out.push_back(std::move(cells));
    }
    return out;
}

std::vector<Table> extract_tables(const RawDocument& doc, std::vector<bool>& consumed, const TableConfig& cfg) {
    consumed.assign(doc.spans.size(), false);
    std::vector<Table> tables;
    for (auto& grid : detect_grids(doc.segments, cfg)) {
        Table t;
        t.cells = extract_cells(grid, doc.spans);
        t.markdown = render_table(t.cells, grid);
        const Rect box = grid.bbox();
        for (std::size_t i = 0; i < doc.spans.size(); ++i)
            if (doc.spans[i].page == grid.page && box.contains(doc.spans[i].bbox.center())) consumed[i] = true;
        t.grid = std::move(grid);
        tables.push_back(std::move(t));
    }
    return tables;
}

}  // namespace chunkwise
