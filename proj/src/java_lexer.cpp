#include "churnscope/java_lexer.hpp"

#include <array>
#include <cctype>

namespace churnscope {

namespace {

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
    return is_ident_start(c) || std::isdigit(c);
}

bool is_digit(unsigned char c) { return std::isdigit(c); }

// Multi-character operators, longest first. Shift operators are absent on
// purpose: lexing ">>" as two '>' makes nested generic closers
// (List<List<T>>) count one level per token.
const std::array<const char*, 19> kOperators = {
    "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",  "+=", "-=", "*=", "/=", "%=",  "&=", "|=", "^=",
};

}  // namespace

LexResult lex_java(const std::string& source) {
    LexResult result;
    auto& out = result.tokens;
    const size_t n = source.size();
    size_t i = 0;
    int line = 1;

    auto push = [&](size_t start, size_t end, TokenKind kind, int at_line) {
        out.push_back(Token{source.substr(start, end - start), at_line, kind});
    };

    while (i < n) {
        const unsigned char c = source[i];

        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }

        // Comments.
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '*') {
            size_t j = i + 2;
            bool closed = false;
            while (j < n) {
                if (source[j] == '\n') ++line;
                if (source[j] == '*' && j + 1 < n && source[j + 1] == '/') {
                    closed = true;
                    j += 2;
                    break;
                }
                ++j;
            }
            if (!closed) result.clean = false;
            i = j;
            continue;
        }

        if (is_ident_start(c)) {
            size_t j = i + 1;
            while (j < n && is_ident_part(static_cast<unsigned char>(source[j]))) ++j;
            push(i, j, TokenKind::Identifier, line);
            i = j;
            continue;
        }

        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(static_cast<unsigned char>(source[i + 1])))) {
            size_t j = i;
            bool seen_dot = false;
            while (j < n) {
                const unsigned char d = source[j];
                if (std::isalnum(d) || d == '_') {
                    ++j;
                } else if (d == '.' && !seen_dot && j + 1 < n &&
                           is_digit(static_cast<unsigned char>(source[j + 1]))) {
                    seen_dot = true;
                    ++j;
                } else if ((d == '+' || d == '-') && j > i &&
                           (source[j - 1] == 'e' || source[j - 1] == 'E' ||
                            source[j - 1] == 'p' || source[j - 1] == 'P') &&
                           j + 1 < n && is_digit(static_cast<unsigned char>(source[j + 1]))) {
                    ++j;
                } else {
                    break;
                }
            }
            push(i, j, TokenKind::Number, line);
            i = j;
            continue;
        }

        // Text block or string literal.
        if (c == '"') {
            const int at_line = line;
            if (i + 2 < n && source[i + 1] == '"' && source[i + 2] == '"') {
                size_t j = i + 3;
                bool closed = false;
                while (j + 2 < n + 1 && j < n) {
                    if (source[j] == '\n') ++line;
                    if (source[j] == '\\') {
                        j += 2;
                        continue;
                    }
                    if (source[j] == '"' && j + 2 < n && source[j + 1] == '"' && source[j + 2] == '"') {
                        closed = true;
                        j += 3;
                        break;
                    }
                    ++j;
                }
                if (!closed) {
                    result.clean = false;
                    j = n;
                }
                push(i, j, TokenKind::String, at_line);
                i = j;
                continue;
            }
            size_t j = i + 1;
            bool closed = false;
            while (j < n && source[j] != '\n') {
                if (source[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (source[j] == '"') {
                    closed = true;
                    ++j;
                    break;
                }
                ++j;
            }
            if (!closed) result.clean = false;
            push(i, j, TokenKind::String, at_line);
            i = j;
            continue;
        }

        if (c == '\'') {
            const int at_line = line;
            size_t j = i + 1;
            bool closed = false;
            while (j < n && source[j] != '\n') {
                if (source[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (source[j] == '\'') {
                    closed = true;
                    ++j;
                    break;
                }
                ++j;
            }
            if (!closed) result.clean = false;
            push(i, j, TokenKind::Char, at_line);
            i = j;
            continue;
        }

        // Operators, longest match; any leftover byte is a one-char token.
        size_t matched = 0;
        for (const char* op : kOperators) {
            const size_t len = std::char_traits<char>::length(op);
            if (len <= n - i && source.compare(i, len, op) == 0) {
                matched = len;
                break;
            }
        }
        if (matched == 0) matched = 1;
        push(i, i + matched, TokenKind::Operator, line);
        i += matched;
    }

    return result;
}

std::vector<std::string> normalize_tokens(const std::string& body) {
    LexResult lexed = lex_java(body);
    std::vector<std::string> texts;
    texts.reserve(lexed.tokens.size());
    for (auto& t : lexed.tokens) texts.push_back(std::move(t.text));
    return texts;
}

}  // namespace churnscope
