#pragma once

#include <string>
#include <vector>

#include "tgg/graph.hpp"

namespace tgg::minijava {

enum class TokenKind { Ident, IntLit, Keyword, Operator, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string lexeme;
    int line = 1;
    int column = 1;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& expected, const std::string& got)
        : Error("parse-error", "line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": expected " + expected +
                                   ", got " + got),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

std::vector<Token> lex(const std::string& text);

// Text -> AST conforming to the minijava-ast metamodel. Binary expressions
// are left-associative over the shared operator table; statement index
// attributes count document order.
Graph parse_program(const std::string& text);

// AST -> canonical text: one statement per line, 4-space indent per block
// depth, single spaces around operators, braces always, newline-terminated.
std::string unparse_program(const Graph& ast);

// unparse(parse(text)); idempotent on its image.
std::string normalize(const std::string& text);

}  // namespace tgg::minijava
