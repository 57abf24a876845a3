#include "content.hpp"

#include <cmath>

#include "chunkwise/errors.hpp"
#include "lexer.hpp"

namespace chunkwise::pdf {

namespace {

constexpr int kMaxFormDepth = 12;
constexpr double kThinRule = 2.5;

double num(const std::vector<Object>& args, std::size_t i) { return i < args.size() ? args[i].as_number() : 0.0; }

}  // namespace

std::shared_ptr<const Font> FontCache::get(const Document& doc, const Object& font_ref) {
    if (font_ref.is_ref()) {
        auto it = by_ref_.find(font_ref.as_ref().num);
        if (it != by_ref_.end()) return it->second;
        auto font = Font::load(doc, font_ref);
        by_ref_.emplace(font_ref.as_ref().num, font);
        return font;
    }
    return Font::load(doc, font_ref);
}

ContentInterpreter::ContentInterpreter(const Document& doc, const Page& page, FontCache& fonts)
    : doc_(doc), page_(page), fonts_(fonts) {}

Point ContentInterpreter::to_page(Point user) const {
    const Point dev = gs_.ctm.apply(user);
    return {dev.x - page_.media_box.x0, page_.media_box.y1 - dev.y};
}

void ContentInterpreter::run() {
    const Object contents = doc_.get(page_.dict, "Contents");
    std::string content;
    if (contents.is_stream()) {
        content = doc_.stream_data(contents);
    } else if (contents.is_array()) {
        for (const auto& part : contents.as_array()) {
            content += doc_.stream_data(doc_.resolve(part));
            content += '\n';
        }
    }
    execute(content, page_.resources, 0);
}

void ContentInterpreter::execute(const std::string& content, const Object& resources, int depth) {
    Lexer lex(content);
    std::vector<Object> args;
    for (;;) {
        Token t = lex.next();
        if (t.kind == TokenKind::End) break;
        if (t.kind != TokenKind::Keyword) {
            try {
                args.push_back(parse_object_from(lex, std::move(t)));
            } catch (const Error&) {
                args.clear();
            }
            continue;
        }
        if (t.text == "BI") {
            // Inline image: skip to the EI that ends the binary data.
            const std::string_view data = lex.data();
            std::size_t id = data.find("ID", lex.pos());
            std::size_t p = id == std::string_view::npos ? data.size() : id + 3;
            while (p + 1 < data.size()) {
                if (data[p] == 'E' && data[p + 1] == 'I' && is_pdf_whitespace(data[p - 1]) &&
                    (p + 2 >= data.size() || is_pdf_whitespace(data[p + 2]))) {
                    break;
                }
                ++p;
            }
            lex.seek(std::min(data.size(), p + 2));
            args.clear();
            continue;
        }
        apply_operator(t.text, args, resources, depth);
        args.clear();
    }
}

void ContentInterpreter::apply_operator(const std::string& op, std::vector<Object>& args, const Object& resources,
                                        int depth) {
    auto begin_subpath = [&](Point p) {
        SubPath sp;
        sp.points.push_back(p);
        path_.push_back(std::move(sp));
        current_ = p;
    };
    auto line_to = [&](Point p, bool straight) {
        if (path_.empty()) begin_subpath(current_);
        path_.back().points.push_back(p);
        path_.back().straight.push_back(straight);
        current_ = p;
    };

    if (op == "q") {
        stack_.push_back(gs_);
    } else if (op == "Q") {
        if (!stack_.empty()) {
            gs_ = stack_.back();
            stack_.pop_back();
        }
    } else if (op == "cm") {
        if (args.size() >= 6) {
            Matrix m{num(args, 0), num(args, 1), num(args, 2), num(args, 3), num(args, 4), num(args, 5)};
            gs_.ctm = m.then(gs_.ctm);
        }
    } else if (op == "w") {
        gs_.line_width = num(args, 0);
    } else if (op == "m") {
        begin_subpath({num(args, 0), num(args, 1)});
    } else if (op == "l") {
        line_to({num(args, 0), num(args, 1)}, true);
    } else if (op == "c") {
        line_to({num(args, 4), num(args, 5)}, false);
    } else if (op == "v" || op == "y") {
        line_to({num(args, 2), num(args, 3)}, false);
    } else if (op == "h") {
        if (!path_.empty()) {
            path_.back().closed = true;
            if (!path_.back().points.empty()) current_ = path_.back().points.front();
        }
    } else if (op == "re") {
        const double x = num(args, 0), y = num(args, 1), w = num(args, 2), h = num(args, 3);
        begin_subpath({x, y});
        line_to({x + w, y}, true);
        line_to({x + w, y + h}, true);
        line_to({x, y + h}, true);
        path_.back().closed = true;
        current_ = {x, y};
    } else if (op == "S" || op == "s") {
        if (op == "s" && !path_.empty()) path_.back().closed = true;
        paint_path(true, false);
    } else if (op == "f" || op == "F" || op == "f*") {
        paint_path(false, true);
    } else if (op == "B" || op == "B*" || op == "b" || op == "b*") {
        if ((op == "b" || op == "b*") && !path_.empty()) path_.back().closed = true;
        paint_path(true, true);
    } else if (op == "n") {
        path_.clear();
    } else if (op == "BT") {
        tm_ = Matrix{};
        tlm_ = Matrix{};
    } else if (op == "ET") {
    } else if (op == "Tf") {
        if (args.size() >= 2) {
            const Object fonts = doc_.get(resources, "Font");
            const Object& entry = fonts.get(args[0].as_name());
            gs_.font = entry.is_null() ? Font::fallback() : fonts_.get(doc_, entry);
            gs_.font_size = num(args, 1);
        }
    } else if (op == "Tc") {
        gs_.char_spacing = num(args, 0);
    } else if (op == "Tw") {
        gs_.word_spacing = num(args, 0);
    } else if (op == "Tz") {
        gs_.h_scale = num(args, 0) / 100.0;
    } else if (op == "TL") {
        gs_.leading = num(args, 0);
    } else if (op == "Ts") {
        gs_.rise = num(args, 0);
    } else if (op == "Td") {
        tlm_ = Matrix::translate(num(args, 0), num(args, 1)).then(tlm_);
        tm_ = tlm_;
    } else if (op == "TD") {
        gs_.leading = -num(args, 1);
        tlm_ = Matrix::translate(num(args, 0), num(args, 1)).then(tlm_);
        tm_ = tlm_;
    } else if (op == "Tm") {
        if (args.size() >= 6) {
            tlm_ = Matrix{num(args, 0), num(args, 1), num(args, 2), num(args, 3), num(args, 4), num(args, 5)};
            tm_ = tlm_;
        }
    } else if (op == "T*") {
        tlm_ = Matrix::translate(0, -gs_.leading).then(tlm_);
        tm_ = tlm_;
    } else if (op == "Tj") {
        if (!args.empty()) show_text(args[0].as_string());
    } else if (op == "'") {
        tlm_ = Matrix::translate(0, -gs_.leading).then(tlm_);
        tm_ = tlm_;
        if (!args.empty()) show_text(args[0].as_string());
    } else if (op == "\"") {
        if (args.size() >= 3) {
            gs_.word_spacing = num(args, 0);
            gs_.char_spacing = num(args, 1);
            tlm_ = Matrix::translate(0, -gs_.leading).then(tlm_);
            tm_ = tlm_;
            show_text(args[2].as_string());
        }
    } else if (op == "TJ") {
        if (!args.empty()) {
            for (const auto& item : args[0].as_array()) {
                if (item.is_string()) {
                    show_text(item.as_string());
                } else if (item.is_number()) {
                    const double tx = -item.as_number() / 1000.0 * gs_.font_size * gs_.h_scale;
                    tm_ = Matrix::translate(tx, 0).then(tm_);
                }
            }
        }
    } else if (op == "Do") {
        if (args.empty() || depth >= kMaxFormDepth) return;
        const Object xobjects = doc_.get(resources, "XObject");
        const Object& ref = xobjects.get(args[0].as_name());
        if (ref.is_ref() && active_forms_.count(ref.as_ref().num)) return;
        const Object form = doc_.resolve(ref);
        if (!form.is_stream() || !form.get("Subtype").is_name("Form")) return;
        if (ref.is_ref()) active_forms_.insert(ref.as_ref().num);
        stack_.push_back(gs_);
        const Array& m = doc_.get(form, "Matrix").as_array();
        if (m.size() == 6) {
            Matrix fm{doc_.resolve(m[0]).as_number(), doc_.resolve(m[1]).as_number(), doc_.resolve(m[2]).as_number(),
                      doc_.resolve(m[3]).as_number(), doc_.resolve(m[4]).as_number(), doc_.resolve(m[5]).as_number()};
            gs_.ctm = fm.then(gs_.ctm);
        }
        Object form_resources = doc_.get(form, "Resources");
        if (form_resources.is_null()) form_resources = resources;
        const Matrix saved_tm = tm_, saved_tlm = tlm_;
        auto saved_path = std::move(path_);
        path_.clear();
        execute(doc_.stream_data(form), form_resources, depth + 1);
        path_ = std::move(saved_path);
        tm_ = saved_tm;
        tlm_ = saved_tlm;
        gs_ = stack_.back();
        stack_.pop_back();
        if (ref.is_ref()) active_forms_.erase(ref.as_ref().num);
    }
}

void ContentInterpreter::show_text(const std::string& bytes) {
    if (!gs_.font) gs_.font = Font::fallback();
    const double fs = gs_.font_size;
    for (auto& glyph : gs_.font->decode(bytes)) {
        const Matrix text_to_page = tm_.then(gs_.ctm);
        const Matrix trm = Matrix{fs * gs_.h_scale, 0, 0, fs, 0, gs_.rise}.then(text_to_page);
        const double vscale = std::hypot(text_to_page.c, text_to_page.d);
        const double width = glyph.advance * fs * gs_.h_scale;

        PlacedGlyph pg;
        pg.text = std::move(glyph.text);
        const Point o = Point{trm.e, trm.f};
        const Point end = text_to_page.apply({width, gs_.rise});
        pg.origin = {o.x - page_.media_box.x0, page_.media_box.y1 - o.y};
        pg.end = {end.x - page_.media_box.x0, page_.media_box.y1 - end.y};
        pg.size = std::abs(fs) * vscale;
        pg.font = gs_.font;
        const double a = text_to_page.a * (fs >= 0 ? 1 : -1);
        const double b = text_to_page.b;
        pg.rotated = std::abs(b) > 1e-3 * std::abs(a) || a <= 0 || text_to_page.d * (fs >= 0 ? 1 : -1) <= 0;
        if (pg.size > 0 && !pg.text.empty()) glyphs_.push_back(std::move(pg));

        const double tx =
            (glyph.advance * fs + gs_.char_spacing + (glyph.word_space ? gs_.word_spacing : 0.0)) * gs_.h_scale;
        tm_ = Matrix::translate(tx, 0).then(tm_);
    }
}

void ContentInterpreter::paint_path(bool stroke, bool fill) {
    const double scale = std::sqrt(std::abs(gs_.ctm.a * gs_.ctm.d - gs_.ctm.b * gs_.ctm.c));
    for (const auto& sp : path_) {
        std::vector<Point> pts;
        pts.reserve(sp.points.size());
        for (const auto& p : sp.points) pts.push_back(to_page(p));
        if (stroke) {
            const double w = gs_.line_width * scale;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                if (sp.straight[i]) segments_.push_back({pts[i], pts[i + 1], w});
            }
            if (sp.closed && pts.size() > 2) {
                const Point& first = pts.front();
                const Point& last = pts.back();
                if (first.x != last.x || first.y != last.y) segments_.push_back({last, first, w});
            }
        }
        if (fill && pts.size() >= 3) {
            // Thin filled rectangles are how many producers draw table rules.
            double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
            bool all_straight = true;
            for (bool s : sp.straight) all_straight = all_straight && s;
            for (const auto& p : pts) {
                x0 = std::min(x0, p.x);
                x1 = std::max(x1, p.x);
                y0 = std::min(y0, p.y);
                y1 = std::max(y1, p.y);
            }
            if (!all_straight || pts.size() > 5) continue;
            const double w = x1 - x0, h = y1 - y0;
            if (h <= kThinRule && w > kThinRule) {
                segments_.push_back({{x0, (y0 + y1) / 2}, {x1, (y0 + y1) / 2}, h});
            } else if (w <= kThinRule && h > kThinRule) {
                segments_.push_back({{(x0 + x1) / 2, y0}, {(x0 + x1) / 2, y1}, w});
            }
        }
    }
    path_.clear();
}

}  // namespace chunkwise::pdf
