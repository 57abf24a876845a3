#pragma once

#include <algorithm>

namespace chunkwise {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle in PDF points, top-left origin, y growing downward.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
    Point center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
    bool well_formed() const { return x0 <= x1 && y0 <= y1; }

    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }

    Rect unite(const Rect& o) const {
        return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1), std::max(y1, o.y1)};
    }

    double intersection_area(const Rect& o) const {
        const double w = std::min(x1, o.x1) - std::max(x0, o.x0);
        const double h = std::min(y1, o.y1) - std::max(y0, o.y0);
        return (w > 0.0 && h > 0.0) ? w * h : 0.0;
    }

    Rect translated(double dx, double dy) const { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace chunkwise
