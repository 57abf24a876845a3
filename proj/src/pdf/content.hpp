#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "chunkwise/geometry.hpp"
#include "chunkwise/pdf/document.hpp"
#include "font.hpp"

namespace chunkwise::pdf {

struct Matrix {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    // Row-vector convention: (*this) applied first, then `o`.
    Matrix then(const Matrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                c * o.b + d * o.d, e * o.a + f * o.c + o.e, e * o.b + f * o.d + o.f};
    }
    Point apply(Point p) const { return {p.x * a + p.y * c + e, p.x * b + p.y * d + f}; }
    static Matrix translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
};

/// One shown glyph in page coordinates (top-left origin).
struct PlacedGlyph {
    std::string text;
    Point origin;     // on the baseline
    Point end;        // origin advanced by the glyph width
    double size = 0;  // effective font size in points
    std::shared_ptr<const Font> font;
    bool rotated = false;
};

struct PlacedSegment {
    Point p0;
    Point p1;
    double width = 0;
};

class FontCache {
public:
    std::shared_ptr<const Font> get(const Document& doc, const Object& font_ref);

private:
    std::map<int, std::shared_ptr<const Font>> by_ref_;
};

/// Runs a page's content streams (including form XObjects) and records glyphs
/// and straight path segments that are stroked or filled as thin rules.
class ContentInterpreter {
public:
    ContentInterpreter(const Document& doc, const Page& page, FontCache& fonts);

    void run();

    const std::vector<PlacedGlyph>& glyphs() const { return glyphs_; }
    const std::vector<PlacedSegment>& segments() const { return segments_; }

private:
    struct GraphicsState {
        Matrix ctm;
        double line_width = 1.0;
        double char_spacing = 0.0;
        double word_spacing = 0.0;
        double h_scale = 1.0;
        double leading = 0.0;
        double rise = 0.0;
        double font_size = 0.0;
        std::shared_ptr<const Font> font;
    };

    struct SubPath {
        std::vector<Point> points;       // user space, transformed to device at paint time
        std::vector<bool> straight;      // edge i: points[i] -> points[i+1]
        bool closed = false;
    };

    void execute(const std::string& content, const Object& resources, int depth);
    void apply_operator(const std::string& op, std::vector<Object>& args, const Object& resources, int depth);
    void show_text(const std::string& bytes);
    void paint_path(bool stroke, bool fill);
    Point to_page(Point user) const;

    const Document& doc_;
    const Page& page_;
    FontCache& fonts_;
    GraphicsState gs_;
    std::vector<GraphicsState> stack_;
    Matrix tm_;
    Matrix tlm_;
    std::vector<SubPath> path_;
    Point current_;
    std::set<int> active_forms_;
    std::vector<PlacedGlyph> glyphs_;
    std::vector<PlacedSegment> segments_;
};

}  // namespace chunkwise::pdf
