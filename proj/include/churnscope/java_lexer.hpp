#pragma once

#include <string>
#include <vector>

namespace churnscope {

enum class TokenKind {
    Identifier,  // identifiers and keywords
    Number,
    String,      // "..." and text blocks, quotes included
    Char,        // '...'
    Operator,    // operators, separators, and any unlexable single char
};

struct Token {
    std::string text;  // verbatim substring of the source
    int line = 0;      // 1-based
    TokenKind kind = TokenKind::Operator;
};

struct LexResult {
    std::vector<Token> tokens;
    // False when a string, char literal, or block comment ran off the end
    // of the input; token content up to that point is still usable.
    bool clean = true;
};

/// Lexes Java source. Comments and whitespace are dropped; string and char
/// literals are kept verbatim as single tokens. Never throws on any input;
/// characters outside the grammar become single-character Operator tokens.
LexResult lex_java(const std::string& source);

/// Token texts of `body`, comments and whitespace removed.
std::vector<std::string> normalize_tokens(const std::string& body);

}  // namespace churnscope
