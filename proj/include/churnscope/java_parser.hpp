#pragma once

#include <optional>
#include <string>
#include <vector>

namespace churnscope {

/// Stable key under which a method's statistics accumulate. Includes the
/// file path and erased parameter types so overloads and same-named methods
/// in different files stay distinct.
struct MethodIdentity {
    std::string file_path;
    std::string qualified_name;            // "pkg.Outer.Inner#name"
    std::vector<std::string> param_types;  // erased to simple names

    /// "path::pkg.Outer#name(T1,T2)"
    std::string canonical() const;

    bool operator==(const MethodIdentity& other) const = default;
    bool operator<(const MethodIdentity& other) const { return canonical() < other.canonical(); }
};

std::optional<MethodIdentity> identity_from_canonical(const std::string& canonical);

/// One method or constructor declaration extracted from a source snapshot.
struct MethodDecl {
    std::string qualified_name;
    std::vector<std::string> param_types;
    std::string file_path;
    int start_line = 0;  // 1-based line of the signature (after annotations)
    int end_line = 0;    // 1-based line of the closing brace or ';'
    std::vector<std::string> body_tokens;       // lexical tokens, comments/ws removed
    std::vector<std::string> signature_tokens;  // declaration head up to the body
    std::string enclosing_class;                // "pkg.Outer.Inner"
    std::string superclass;  // simple name of the enclosing class's extends target, or ""

    MethodIdentity identity() const { return {file_path, qualified_name, param_types}; }
    /// The part after '#'.
    std::string method_name() const;
    /// The part before '#' (same as enclosing_class).
    std::string class_name() const { return enclosing_class; }
};

/// A named type declaration; used to build class hierarchies for
/// pull-up/push-down classification.
struct TypeDecl {
    std::string qualified_name;  // "pkg.Outer.Inner"
    std::string simple_name;
    std::string superclass;  // simple name of extends target, or ""
};

struct ParseResult {
    std::vector<MethodDecl> methods;
    std::vector<TypeDecl> types;
    // True when the file could not be parsed with confidence (unterminated
    // literal/comment or unbalanced braces); methods/types are then empty
    // and the caller should skip the file for this commit.
    bool degraded = false;
};

/// Parses Java source text into a flat list of method declarations, in
/// source order. Error-tolerant and total: any input is accepted, and a
/// syntax error inside one method never loses its siblings.
///
/// Scope: packages, classes, interfaces, enums, records, nested types,
/// methods and constructors. Annotations are skipped, generics are erased
/// to simple names in param_types, lambdas and anonymous-class bodies are
/// plain tokens of the enclosing method, and initializer blocks are not
/// methods.
ParseResult extract_methods(const std::string& source, const std::string& file_path);

}  // namespace churnscope
