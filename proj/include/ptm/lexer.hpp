#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptm/ast.hpp"

namespace ptm {

enum class TokenKind {
    Identifier,
    Integer,
    KwRepeat,
    KwForeachBlock,
    KwGatherPartial,
    KwStep,
    Assign,    // =
    Less,      // <
    LBracket,  // [
    RBracket,  // ]
    LParen,    // (
    RParen,    // )
    LBrace,    // {
    RBrace,    // }
    Comma,     // ,
    Star,      // *
    Plus,      // +
    Dot,       // .
    Percent,   // %
    Newline,
    EndOfFile,
};

std::string to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;
    SourcePos pos;
    long long int_value = 0;  // valid for Integer tokens
};

// Splits source text into tokens. '#' starts a comment running to end of
// line (the "#dialect" pragma rides on this). Runs of blank lines collapse
// to a single Newline token. Throws DslError on unrecognized characters.
std::vector<Token> tokenize(const std::string& source);

// Reads an optional "#dialect v1|v2" pragma from the first non-blank line.
std::optional<Dialect> detect_dialect(const std::string& source);

}  // namespace ptm
