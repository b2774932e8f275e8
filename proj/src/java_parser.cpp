#include "churnscope/java_parser.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "churnscope/java_lexer.hpp"

namespace churnscope {

std::string MethodIdentity::canonical() const {
    std::string s = file_path;
    s += "::";
    s += qualified_name;
    s += '(';
    for (size_t i = 0; i < param_types.size(); ++i) {
        if (i) s += ',';
        s += param_types[i];
    }
    s += ')';
    return s;
}

std::optional<MethodIdentity> identity_from_canonical(const std::string& canonical) {
    size_t sep = canonical.find("::");
    if (sep == std::string::npos) return std::nullopt;
    size_t open = canonical.find('(', sep + 2);
    if (open == std::string::npos || canonical.back() != ')') return std::nullopt;

    MethodIdentity id;
    id.file_path = canonical.substr(0, sep);
    id.qualified_name = canonical.substr(sep + 2, open - (sep + 2));
    std::string params = canonical.substr(open + 1, canonical.size() - open - 2);
    if (!params.empty()) {
        size_t start = 0;
        while (true) {
            size_t comma = params.find(',', start);
            if (comma == std::string::npos) {
                id.param_types.push_back(params.substr(start));
                break;
            }
            id.param_types.push_back(params.substr(start, comma - start));
            start = comma + 1;
        }
    }
    if (id.qualified_name.find('#') == std::string::npos) return std::nullopt;
    return id;
}

std::string MethodDecl::method_name() const {
    size_t hash = qualified_name.rfind('#');
    return hash == std::string::npos ? qualified_name : qualified_name.substr(hash + 1);
}

namespace {

const std::unordered_set<std::string>& modifier_words() {
    static const std::unordered_set<std::string> words = {
        "public",   "protected", "private",  "static",    "final",
        "abstract", "synchronized", "native", "strictfp", "transient",
        "volatile", "default",   "sealed",
    };
    return words;
}

bool is_modifier(const std::string& t) { return modifier_words().count(t) > 0; }

// Recursive-descent scanner over the token stream. It only commits to
// structure it can see locally (a '(' right after a name, a balanced '{'),
// so a bad construct costs at most its own declaration.
class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::string file_path)
        : toks_(tokens), file_(std::move(file_path)) {}

    ParseResult run() {
        parse_compilation_unit();
        if (!structure_ok_) {
            out_.methods.clear();
            out_.types.clear();
            out_.degraded = true;
        }
        return std::move(out_);
    }

private:
    const std::vector<Token>& toks_;
    std::string file_;
    size_t pos_ = 0;
    std::string package_;
    std::vector<std::string> type_names_;   // nesting stack of simple names
    std::vector<std::string> type_supers_;  // parallel: extends target or ""
    ParseResult out_;
    bool structure_ok_ = true;
    std::set<std::string> seen_keys_;  // dedupe (qualified_name, params)

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& cur() const { return toks_[pos_]; }
    const std::string& text() const { return toks_[pos_].text; }
    bool is(const char* t) const { return !at_end() && toks_[pos_].text == t; }
    const Token* peek(size_t ahead) const {
        return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
    }
    bool peek_is(size_t ahead, const char* t) const {
        const Token* p = peek(ahead);
        return p && p->text == t;
    }
    void advance() { ++pos_; }

    std::string qualified_type_name() const {
        std::string qn = package_;
        for (const auto& n : type_names_) {
            if (!qn.empty()) qn += '.';
            qn += n;
        }
        return qn;
    }

    // ---- token-level skippers ------------------------------------------

    // At '{'. Consumes through the matching '}'. Returns false (and flags
    // the whole parse) on EOF, since everything after an unbalanced brace
    // is guesswork.
    bool skip_braces() {
        int depth = 0;
        while (!at_end()) {
            if (is("{")) ++depth;
            else if (is("}")) {
                --depth;
                if (depth == 0) {
                    advance();
                    return true;
                }
            }
            advance();
        }
        structure_ok_ = false;
        return false;
    }

    bool skip_parens() {
        int depth = 0;
        while (!at_end()) {
            if (is("(")) ++depth;
            else if (is(")")) {
                --depth;
                if (depth == 0) {
                    advance();
                    return true;
                }
            }
            advance();
        }
        structure_ok_ = false;
        return false;
    }

    // At '<'. Try to consume a balanced type-argument list. '<' is also the
    // less-than operator, so this speculates: if a token shows up that can't
    // appear inside type arguments, rewind and report failure.
    bool skip_angles() {
        size_t save = pos_;
        int depth = 0;
        size_t steps = 0;
        while (!at_end() && steps < 1024) {
            const std::string& t = text();
            if (t == "<") {
                ++depth;
            } else if (t == ">") {
                --depth;
                if (depth == 0) {
                    advance();
                    return true;
                }
            } else if (!(cur().kind == TokenKind::Identifier || t == "," || t == "." ||
                         t == "?" || t == "[" || t == "]" || t == "&" || t == "@")) {
                break;
            }
            advance();
            ++steps;
        }
        pos_ = save;
        return false;
    }

    // At '@'. Consumes the annotation name and any argument list.
    void skip_annotation() {
        advance();  // '@'
        while (!at_end() && cur().kind == TokenKind::Identifier) {
            advance();
            if (is(".")) advance();
            else break;
        }
        if (is("(")) skip_parens();
    }

    // Consumes through the ';' that ends a field/statement, ignoring any
    // ';' nested in braces or parens (lambda bodies, anonymous classes).
    // Stops short of a '}' at depth zero so a missing ';' can't eat the
    // enclosing class body.
    void skip_to_semicolon() {
        int depth = 0;
        while (!at_end()) {
            const std::string& t = text();
            if (t == "{" || t == "(" || t == "[") ++depth;
            else if (t == ")" || t == "]") --depth;
            else if (t == "}") {
                if (depth <= 0) return;
                --depth;
            } else if (t == ";" && depth <= 0) {
                advance();
                return;
            }
            advance();
        }
    }

    // ---- grammar-ish layers --------------------------------------------

    void parse_compilation_unit() {
        while (!at_end()) {
            if (is("package")) {
                advance();
                package_.clear();
                while (!at_end() && cur().kind == TokenKind::Identifier) {
                    if (!package_.empty()) package_ += '.';
                    package_ += text();
                    advance();
                    if (is(".")) advance();
                    else break;
                }
                if (is(";")) advance();
            } else if (is("import")) {
                skip_to_semicolon();
            } else if (is("@") && peek_is(1, "interface")) {
                parse_type_decl();
            } else if (is("@")) {
                skip_annotation();
            } else if (at_type_keyword()) {
                parse_type_decl();
            } else if (!at_end() && is_modifier(text())) {
                advance();
            } else if (is("{")) {
                skip_braces();
            } else if (!at_end()) {
                advance();  // stray token; keep going
            }
        }
    }

    bool at_type_keyword() const {
        if (at_end()) return false;
        const std::string& t = text();
        if (t == "class" || t == "interface" || t == "enum") return true;
        // 'record' is contextual: only a declaration when followed by a name
        // and a header.
        if (t == "record") {
            const Token* n1 = peek(1);
            const Token* n2 = peek(2);
            return n1 && n1->kind == TokenKind::Identifier && n2 &&
                   (n2->text == "(" || n2->text == "<");
        }
        return false;
    }

    // At "class"/"interface"/"enum"/"record" or at '@' of "@interface".
    void parse_type_decl() {
        std::string kind;
        if (is("@")) {
            advance();
            kind = "@interface";
            if (is("interface")) advance();
        } else {
            kind = text();
            advance();
        }
        if (at_end() || cur().kind != TokenKind::Identifier) return;
        std::string name = text();
        advance();

        std::string superclass;
        if (is("<")) {
            if (!skip_angles()) advance();
        }
        if (kind == "record" && is("(")) skip_parens();

        // Header: extends/implements/permits lists, up to the body.
        while (!at_end() && !is("{") && !is(";") && !is("}")) {
            if (is("extends") && kind == "class") {
                advance();
                superclass = read_type_simple_name();
            } else if (is("<")) {
                if (!skip_angles()) advance();
            } else if (is("@")) {
                skip_annotation();
            } else {
                advance();
            }
        }

        type_names_.push_back(name);
        type_supers_.push_back(superclass);
        out_.types.push_back({qualified_type_name(), name, superclass});

        if (is("{")) {
            advance();
            if (kind == "enum") parse_enum_constants();
            while (!at_end() && !is("}")) parse_member();
            if (is("}")) advance();
            else structure_ok_ = false;
        }
        // A lone ';' (or nothing) after the header is an empty declaration.
        if (is(";")) advance();

        type_names_.pop_back();
        type_supers_.pop_back();
    }

    // Reads "a.b.C" (plus optional type args) and returns "C".
    std::string read_type_simple_name() {
        std::string simple;
        while (!at_end() && cur().kind == TokenKind::Identifier) {
            simple = text();
            advance();
            if (is("<") && !skip_angles()) break;
            if (is(".")) advance();
            else break;
        }
        return simple;
    }

    // Enum bodies open with a constant list; a ';' switches to ordinary
    // members. Constant argument lists and class bodies are skipped whole,
    // which also keeps methods of constant bodies out of the result (they
    // are anonymous subclasses).
    void parse_enum_constants() {
        while (!at_end()) {
            if (is(";")) {
                advance();
                return;
            }
            if (is("}")) return;  // caller consumes
            if (is("@")) {
                skip_annotation();
                continue;
            }
            if (cur().kind == TokenKind::Identifier) {
                advance();
                if (is("(")) skip_parens();
                if (is("{")) skip_braces();
                continue;
            }
            if (is(",")) {
                advance();
                continue;
            }
            advance();  // stray
        }
    }

    // One class-body member: field, method, constructor, nested type, or
    // initializer block.
    void parse_member() {
        while (is("@") && !peek_is(1, "interface")) skip_annotation();
        if (is("@") && peek_is(1, "interface")) {
            parse_type_decl();
            return;
        }
        if (at_end()) return;

        size_t decl_start = pos_;
        int decl_line = cur().line;

        while (!at_end() && is_modifier(text())) advance();
        // "non-sealed" lexes as three tokens; treat the tail as noise.
        if (is("non")) {
            advance();
            if (is("-")) advance();
            if (is("sealed")) advance();
        }

        if (at_type_keyword()) {
            parse_type_decl();
            return;
        }
        if (is("{")) {  // instance or static initializer
            skip_braces();
            return;
        }
        if (is(";")) {
            advance();
            return;
        }
        if (is("<")) {  // method type parameters
            if (!skip_angles()) advance();
        }

        // Walk the declaration head. The first '(' directly after an
        // identifier names a method or constructor (a constructor is just
        // the case where that identifier is the class's own name); '=' or
        // ';' first means a field.
        std::string last_ident;
        while (!at_end()) {
            const std::string& t = text();
            if (t == "(") {
                if (!last_ident.empty()) {
                    parse_method_rest(decl_start, decl_line, last_ident);
                } else {
                    skip_parens();
                    skip_to_semicolon();
                }
                return;
            }
            if (t == "=") {
                skip_to_semicolon();
                return;
            }
            if (t == ";") {
                advance();
                return;
            }
            if (t == "{") {  // no name seen: malformed, swallow the block
                skip_braces();
                return;
            }
            if (t == "}") return;  // class body ends; caller consumes
            if (t == "<") {
                if (skip_angles()) continue;
                advance();
                continue;
            }
            if (t == "@") {
                skip_annotation();
                continue;
            }
            if (at_type_keyword()) {  // e.g. "non-sealed class X"
                parse_type_decl();
                return;
            }
            if (cur().kind == TokenKind::Identifier && !is_modifier(t)) last_ident = t;
            advance();
        }
    }

    // At '(' of a method/constructor. Parses params, trailer, and body.
    void parse_method_rest(size_t decl_start, int decl_line, const std::string& name) {
        std::vector<std::string> params;
        if (!parse_param_list(params)) return;

        // Trailer: throws list, archaic array suffix, annotation-member
        // default value. Ends at '{' (body) or ';' (abstract/native).
        while (!at_end() && !is("{") && !is(";")) {
            if (is("}")) return;  // truncated declaration: drop it
            if (is("default")) {
                advance();
                skip_to_semicolon();
                // skip_to_semicolon consumed the ';'; declaration is done.
                emit_method(decl_start, pos_, decl_line, toks_[pos_ - 1].line, name, params,
                            /*body_begin=*/pos_, /*body_end=*/pos_);
                return;
            }
            if (is("@")) {
                skip_annotation();
                continue;
            }
            advance();
        }
        if (at_end()) return;

        if (is(";")) {
            int end_line = cur().line;
            size_t sig_end = pos_;
            advance();
            emit_method(decl_start, sig_end, decl_line, end_line, name, params, pos_, pos_);
            return;
        }

        // Body.
        size_t open = pos_;
        if (!skip_braces()) return;
        size_t close = pos_ - 1;  // index of '}'
        emit_method(decl_start, open, decl_line, toks_[close].line, name, params, open + 1,
                    close);
    }

    // Collects erased parameter types from the '('...')' group, splitting
    // on commas that sit outside nested parens/brackets/angles.
    bool parse_param_list(std::vector<std::string>& params) {
        size_t open = pos_;
        if (!skip_parens()) return false;
        size_t close = pos_ - 1;

        size_t group_start = open + 1;
        int paren = 0, bracket = 0, angle = 0;
        for (size_t i = open + 1; i <= close; ++i) {
            const std::string& t = toks_[i].text;
            bool at_close = (i == close);
            if (!at_close) {
                if (t == "(") ++paren;
                else if (t == ")") --paren;
                else if (t == "[") ++bracket;
                else if (t == "]") --bracket;
                else if (t == "<") ++angle;
                else if (t == ">") angle = std::max(0, angle - 1);
            }
            if (at_close || (t == "," && paren == 0 && bracket == 0 && angle == 0)) {
                if (i > group_start) {
                    auto erased = erase_param_type(group_start, i);
                    if (erased) params.push_back(*erased);
                }
                group_start = i + 1;
            }
        }
        return true;
    }

    // Reduces one parameter declaration to its erased simple type name:
    // annotations and 'final' dropped, generics erased, the trailing
    // parameter name removed, array/vararg dimensions appended as "[]".
    // Returns nullopt for a receiver parameter ("this").
    std::optional<std::string> erase_param_type(size_t begin, size_t end) {
        std::vector<const Token*> kept;
        int varargs = 0;
        size_t i = begin;
        while (i < end) {
            const std::string& t = toks_[i].text;
            if (t == "@") {
                // annotation: @ Name(.Name)* (args)?
                ++i;
                while (i < end && toks_[i].kind == TokenKind::Identifier) {
                    ++i;
                    if (i < end && toks_[i].text == ".") ++i;
                    else break;
                }
                if (i < end && toks_[i].text == "(") {
                    int d = 0;
                    while (i < end) {
                        if (toks_[i].text == "(") ++d;
                        else if (toks_[i].text == ")" && --d == 0) {
                            ++i;
                            break;
                        }
                        ++i;
                    }
                }
                continue;
            }
            if (t == "final") {
                ++i;
                continue;
            }
            if (t == "<") {
                int d = 0;
                while (i < end) {
                    if (toks_[i].text == "<") ++d;
                    else if (toks_[i].text == ">" && --d == 0) {
                        ++i;
                        break;
                    }
                    ++i;
                }
                continue;
            }
            if (t == "...") {
                ++varargs;
                ++i;
                continue;
            }
            kept.push_back(&toks_[i]);
            ++i;
        }
        if (kept.empty()) return std::nullopt;
        if (kept.back()->text == "this") return std::nullopt;  // receiver param

        // The parameter name is the last identifier; everything identifier-
        // like before it is the type. "int a[]" and "int[] a" both erase to
        // "int[]".
        int name_idx = -1;
        for (int k = static_cast<int>(kept.size()) - 1; k >= 0; --k) {
            if (kept[k]->kind == TokenKind::Identifier) {
                name_idx = k;
                break;
            }
        }
        std::string simple;
        int brackets = varargs;
        for (int k = 0; k < static_cast<int>(kept.size()); ++k) {
            if (k == name_idx) continue;
            if (kept[k]->text == "[") ++brackets;
            else if (kept[k]->kind == TokenKind::Identifier) simple = kept[k]->text;
        }
        if (simple.empty() && name_idx >= 0) {
            // Only one identifier present: treat it as the type (unnamed or
            // malformed parameter).
            simple = kept[name_idx]->text;
        }
        if (simple.empty()) return std::nullopt;
        for (int k = 0; k < brackets; ++k) simple += "[]";
        return simple;
    }

    void emit_method(size_t decl_start, size_t sig_end, int start_line, int end_line,
                     const std::string& name, const std::vector<std::string>& params,
                     size_t body_begin, size_t body_end) {
        if (type_names_.empty()) return;  // method outside any type: junk

        MethodDecl m;
        m.file_path = file_;
        m.enclosing_class = qualified_type_name();
        m.superclass = type_supers_.back();
        m.qualified_name = m.enclosing_class + "#" + name;
        m.param_types = params;
        m.start_line = start_line;
        m.end_line = end_line;
        for (size_t i = decl_start; i < sig_end; ++i) m.signature_tokens.push_back(toks_[i].text);
        for (size_t i = body_begin; i < body_end; ++i) m.body_tokens.push_back(toks_[i].text);

        std::string key = m.identity().canonical();
        if (!seen_keys_.insert(key).second) return;  // duplicate decl: keep first
        out_.methods.push_back(std::move(m));
    }
};

}  // namespace

ParseResult extract_methods(const std::string& source, const std::string& file_path) {
    LexResult lexed = lex_java(source);
    if (!lexed.clean) {
        ParseResult r;
        r.degraded = true;
        return r;
    }
    Parser p(lexed.tokens, file_path);
    return p.run();
}

}  // namespace churnscope
