#include "churnscope/method_diff.hpp"

#include <map>
#include <string>

namespace churnscope {

const char* to_string(ChangeKind kind) {
    switch (kind) {
        case ChangeKind::Unchanged: return "unchanged";
        case ChangeKind::Modified: return "modified";
        case ChangeKind::Added: return "added";
        case ChangeKind::Deleted: return "deleted";
    }
    return "?";
}

namespace {

// File-local match key: name and erased params, no file path, so the same
// matcher works when a file was renamed between the two revisions.
std::string match_key(const MethodDecl& m) {
    std::string k = m.qualified_name;
    k += '(';
    for (size_t i = 0; i < m.param_types.size(); ++i) {
        if (i) k += ',';
        k += m.param_types[i];
    }
    k += ')';
    return k;
}

}  // namespace

MethodMatching match_methods(const std::vector<MethodDecl>& before,
                             const std::vector<MethodDecl>& after) {
    MethodMatching result;
    std::map<std::string, size_t> before_by_key;
    for (size_t i = 0; i < before.size(); ++i) before_by_key.emplace(match_key(before[i]), i);

    std::vector<bool> before_used(before.size(), false);
    for (const MethodDecl& a : after) {
        auto it = before_by_key.find(match_key(a));
        if (it != before_by_key.end() && !before_used[it->second]) {
            before_used[it->second] = true;
            result.matched_pairs.emplace_back(before[it->second], a);
        } else {
            result.unmatched_after.push_back(a);
        }
    }
    for (size_t i = 0; i < before.size(); ++i) {
        if (!before_used[i]) result.unmatched_before.push_back(before[i]);
    }
    return result;
}

std::vector<MethodChange> classify_changes(const MethodMatching& matching) {
    std::vector<MethodChange> changes;
    changes.reserve(matching.matched_pairs.size() + matching.unmatched_before.size() +
                    matching.unmatched_after.size());
    for (const auto& [b, a] : matching.matched_pairs) {
        bool modified = b.body_tokens != a.body_tokens || b.signature_tokens != a.signature_tokens;
        changes.push_back({a.identity(), modified ? ChangeKind::Modified : ChangeKind::Unchanged});
    }
    for (const auto& b : matching.unmatched_before) changes.push_back({b.identity(), ChangeKind::Deleted});
    for (const auto& a : matching.unmatched_after) changes.push_back({a.identity(), ChangeKind::Added});
    return changes;
}

}  // namespace churnscope
