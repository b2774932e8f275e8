#pragma once

#include <utility>
#include <vector>

#include "churnscope/java_parser.hpp"

namespace churnscope {

enum class ChangeKind { Unchanged, Modified, Added, Deleted };

const char* to_string(ChangeKind kind);

/// Result of exact-signature matching between two revisions of one file.
struct MethodMatching {
    std::vector<std::pair<MethodDecl, MethodDecl>> matched_pairs;  // (before, after)
    std::vector<MethodDecl> unmatched_before;
    std::vector<MethodDecl> unmatched_after;
};

/// Pairs methods by exact (qualified_name, param_types). Everything else
/// lands in the unmatched lists; similarity-based reclassification (renames
/// and friends) happens downstream in refactoring detection.
MethodMatching match_methods(const std::vector<MethodDecl>& before,
                             const std::vector<MethodDecl>& after);

struct MethodChange {
    MethodIdentity identity;
    ChangeKind kind;
};

/// Matched pair -> Modified iff the signature or body tokens differ, else
/// Unchanged. Unmatched before -> Deleted, unmatched after -> Added.
/// Unchanged entries are included; callers filter.
std::vector<MethodChange> classify_changes(const MethodMatching& matching);

}  // namespace churnscope
