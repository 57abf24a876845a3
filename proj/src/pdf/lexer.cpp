#include "lexer.hpp"

#include <cstdlib>

#include "chunkwise/errors.hpp"

namespace chunkwise::pdf {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr int kMaxDepth = 256;

Object parse_object_depth(Lexer& lex, Token first, int depth);

}  // namespace

void Lexer::skip_whitespace() {
    while (pos_ < data_.size()) {
        const char c = data_[pos_];
        if (is_pdf_whitespace(c)) {
            ++pos_;
        } else if (c == '%') {
            while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
        } else {
            break;
        }
    }
}

Token Lexer::peek() {
    const std::size_t saved = pos_;
    Token t = next();
    pos_ = saved;
    return t;
}

std::string Lexer::read_literal_string() {
    // pos_ is just past '('
    std::string out;
    int depth = 1;
    while (pos_ < data_.size()) {
        char c = data_[pos_++];
        if (c == '\\') {
            if (pos_ >= data_.size()) break;
            char e = data_[pos_++];
            switch (e) {
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case '(': out += '('; break;
                case ')': out += ')'; break;
                case '\\': out += '\\'; break;
                case '\r':
                    if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
                    break;
                case '\n': break;
                default:
                    if (e >= '0' && e <= '7') {
                        int v = e - '0';
                        for (int k = 0; k < 2 && pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '7'; ++k) {
                            v = v * 8 + (data_[pos_++] - '0');
                        }
                        out += static_cast<char>(v & 0xFF);
                    } else {
                        out += e;
                    }
            }
        } else if (c == '(') {
            ++depth;
            out += c;
        } else if (c == ')') {
            if (--depth == 0) return out;
            out += c;
        } else if (c == '\r') {
            if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
            out += '\n';
        } else {
            out += c;
        }
    }
    return out;  // unterminated: keep what we have
}

std::string Lexer::read_hex_string() {
    std::string out;
    int pending = -1;
    while (pos_ < data_.size()) {
        const char c = data_[pos_++];
        if (c == '>') break;
        const int v = hex_value(c);
        if (v < 0) continue;
        if (pending < 0) {
            pending = v;
        } else {
            out += static_cast<char>(pending * 16 + v);
            pending = -1;
        }
    }
    if (pending >= 0) out += static_cast<char>(pending * 16);
    return out;
}

std::string Lexer::read_name() {
    std::string out;
    while (pos_ < data_.size()) {
        const char c = data_[pos_];
        if (is_pdf_whitespace(c) || is_pdf_delimiter(c)) break;
        ++pos_;
        if (c == '#' && pos_ + 1 < data_.size() && hex_value(data_[pos_]) >= 0 && hex_value(data_[pos_ + 1]) >= 0) {
            out += static_cast<char>(hex_value(data_[pos_]) * 16 + hex_value(data_[pos_ + 1]));
            pos_ += 2;
        } else {
            out += c;
        }
    }
    return out;
}

Token Lexer::next() {
    skip_whitespace();
    Token t;
    if (pos_ >= data_.size()) return t;
    const char c = data_[pos_];
    switch (c) {
        case '[': ++pos_; t.kind = TokenKind::ArrayOpen; return t;
        case ']': ++pos_; t.kind = TokenKind::ArrayClose; return t;
        case '(':
            ++pos_;
            t.kind = TokenKind::String;
            t.text = read_literal_string();
            return t;
        case '/':
            ++pos_;
            t.kind = TokenKind::Name;
            t.text = read_name();
            return t;
        case '<':
            if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') {
                pos_ += 2;
                t.kind = TokenKind::DictOpen;
                return t;
            }
            ++pos_;
            t.kind = TokenKind::String;
            t.text = read_hex_string();
            return t;
        case '>':
            if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') {
                pos_ += 2;
                t.kind = TokenKind::DictClose;
                return t;
            }
            ++pos_;
            t.kind = TokenKind::Keyword;
            t.text = ">";
            return t;
        case '{':
        case '}':
        case ')':
            ++pos_;
            t.kind = TokenKind::Keyword;
            t.text = std::string(1, c);
            return t;
        default: break;
    }

    const std::size_t start = pos_;
    while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) && !is_pdf_delimiter(data_[pos_])) ++pos_;
    std::string_view word = data_.substr(start, pos_ - start);

    bool numeric = !word.empty();
    bool has_dot = false;
    bool has_digit = false;
    for (std::size_t i = 0; i < word.size() && numeric; ++i) {
        const char w = word[i];
        if (w >= '0' && w <= '9') {
            has_digit = true;
        } else if (w == '.') {
            if (has_dot) numeric = false;
            has_dot = true;
        } else if ((w == '-' || w == '+') && i == 0) {
        } else {
            numeric = false;
        }
    }
    if (numeric && has_digit) {
        const std::string s(word);
        if (has_dot) {
            t.kind = TokenKind::Real;
            t.real = std::strtod(s.c_str(), nullptr);
        } else {
            t.kind = TokenKind::Integer;
            t.integer = std::strtoll(s.c_str(), nullptr, 10);
        }
        return t;
    }
    if (word.empty()) {
        // Stray byte that is neither delimiter nor token.
        ++pos_;
        t.kind = TokenKind::Keyword;
        t.text = std::string(1, c);
        return t;
    }
    t.kind = TokenKind::Keyword;
    t.text = std::string(word);
    return t;
}

namespace {

Object parse_object_depth(Lexer& lex, Token first, int depth) {
    if (depth > kMaxDepth) throw Error(ErrorCode::MalformedPdf, "object nesting too deep");
    switch (first.kind) {
        case TokenKind::End: throw Error(ErrorCode::MalformedPdf, "unexpected end of data");
        case TokenKind::Real: return Object(first.real);
        case TokenKind::String: return Object(std::move(first.text));
        case TokenKind::Name: return Object(Name{std::move(first.text)});
        case TokenKind::Integer: {
            // Look ahead for "gen R".
            const std::size_t saved = lex.pos();
            Token second = lex.next();
            if (second.kind == TokenKind::Integer) {
                Token third = lex.next();
                if (third.is_keyword("R")) {
                    return Object(Ref{static_cast<int>(first.integer), static_cast<int>(second.integer)});
                }
            }
            lex.seek(saved);
            return Object(first.integer);
        }
        case TokenKind::ArrayOpen: {
            Array arr;
            for (;;) {
                Token t = lex.next();
                if (t.kind == TokenKind::ArrayClose) break;
                if (t.kind == TokenKind::End) throw Error(ErrorCode::MalformedPdf, "unterminated array");
                if (t.kind == TokenKind::DictClose) continue;
                arr.push_back(parse_object_depth(lex, std::move(t), depth + 1));
            }
            return Object(std::move(arr));
        }
        case TokenKind::DictOpen: {
            Dict dict;
            for (;;) {
                Token key = lex.next();
                if (key.kind == TokenKind::DictClose) break;
                if (key.kind == TokenKind::End) throw Error(ErrorCode::MalformedPdf, "unterminated dictionary");
                if (key.kind != TokenKind::Name) {
                    // Skip garbage keys rather than failing the whole document.
                    continue;
                }
                Token vt = lex.next();
                if (vt.kind == TokenKind::DictClose) {
                    dict.emplace(std::move(key.text), Object());
                    break;
                }
                dict.insert_or_assign(std::move(key.text), parse_object_depth(lex, std::move(vt), depth + 1));
            }
            return Object(std::move(dict));
        }
        case TokenKind::ArrayClose:
        case TokenKind::DictClose: throw Error(ErrorCode::MalformedPdf, "unexpected closing delimiter");
        case TokenKind::Keyword:
            if (first.text == "true") return Object(true);
            if (first.text == "false") return Object(false);
            if (first.text == "null") return Object();
            // Bare keywords inside objects are invalid; treat as null.
            return Object();
    }
    return Object();
}

}  // namespace

Object parse_object_from(Lexer& lex, Token first) { return parse_object_depth(lex, std::move(first), 0); }

Object parse_object(Lexer& lex) { return parse_object_depth(lex, lex.next(), 0); }

}  // namespace chunkwise::pdf
