#pragma once

#include <string>
#include <string_view>

namespace fogweaver::dsl {

enum class TokKind { ident, string, number, punct, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    std::string unit;  // suffix glued to a number, e.g. "ms" in 10ms
    double number = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text);

    const Token& peek() const { return cur_; }
    Token next();

private:
    void skip_blank();
    void advance();

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

// Shortest representation that parses back to the same double.
std::string format_number(double v);
std::string quote(const std::string& s);

}  // namespace fogweaver::dsl
