#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "chunkwise/pdf/object.hpp"

namespace chunkwise::pdf {

enum class TokenKind { End, Integer, Real, Name, String, ArrayOpen, ArrayClose, DictOpen, DictClose, Keyword };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // name value, string bytes, or keyword
    std::int64_t integer = 0;
    double real = 0.0;

    bool is_keyword(std::string_view k) const { return kind == TokenKind::Keyword && text == k; }
};

inline bool is_pdf_whitespace(char c) {
    return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}

inline bool is_pdf_delimiter(char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' ||
           c == '/' || c == '%';
}

class Lexer {
public:
    explicit Lexer(std::string_view data, std::size_t pos = 0) : data_(data), pos_(pos) {}

    Token next();
    Token peek();
    void skip_whitespace();

    std::size_t pos() const { return pos_; }
    void seek(std::size_t pos) { pos_ = pos; }
    std::string_view data() const { return data_; }
    bool at_end() const { return pos_ >= data_.size(); }

private:
    std::string read_literal_string();
    std::string read_hex_string();
    std::string read_name();

    std::string_view data_;
    std::size_t pos_;
};

/// Parses one object starting at the lexer's position. Resolves "n g R" into Ref
/// but never loads indirect objects. Throws Error(MalformedPdf).
Object parse_object(Lexer& lex);
Object parse_object_from(Lexer& lex, Token first);

}  // namespace chunkwise::pdf
