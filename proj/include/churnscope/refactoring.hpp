#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "churnscope/java_parser.hpp"
#include "churnscope/method_diff.hpp"

namespace churnscope {

enum class RefactoringKind {
    ExtractMethod,
    ExtractAndMove,
    InlineMethod,
    RenameMethod,
    MoveMethod,
    PullUpMethod,
    PushDownMethod,
};

const char* to_string(RefactoringKind kind);

/// One detected identity-changing event within a commit.
///
/// `before` is absent only for extractions (the method did not exist).
/// `host` is the method extracted-from or inlined-into. For inlines,
/// `after` repeats `before` (the method ends the commit deleted; the field
/// is kept populated so every event names a current subject).
struct RefactoringEvent {
    RefactoringKind kind;
    std::optional<MethodIdentity> before;
    MethodIdentity after;
    std::optional<MethodIdentity> host;
};

struct DetectorConfig {
    double move_threshold = 0.60;         // pass 1, same signature across classes
    double rename_threshold = 0.75;       // pass 2, same class
    double containment_threshold = 0.50;  // passes 3/4, extract and inline
    double rename_move_threshold = 0.85;  // pass 5, simultaneous rename + move
    // Applied later by the model-update step, carried here so one struct
    // configures the whole refactoring stage.
    bool count_renames = true;
};

/// Extends-relationships keyed by simple class name. Superclass names come
/// from extends clauses, so they are simple names too; resolution is
/// name-based, which is as much as a single-file parser can promise.
class ClassHierarchy {
public:
    void add(const TypeDecl& type);
    /// True when `ancestor` appears on `descendant`'s extends chain
    /// (proper ancestor: a class is not its own ancestor).
    bool is_ancestor(const std::string& ancestor, const std::string& descendant) const;

private:
    std::map<std::string, std::string> super_of_;
};

/// Runs the ordered detection passes over one commit's per-file matchings:
///   1. move / pull-up / push-down: same name+params, different class
///   2. rename: same class, high body similarity
///   3. extract (and extract-and-move): new method absorbed removed tokens
///   4. inline: deleted method's tokens absorbed by a modified method
///   5. simultaneous rename+move: very high similarity across classes
/// Each deleted/added method joins at most one event. Output order and
/// content are deterministic under permutation of the inputs.
std::vector<RefactoringEvent> detect_refactorings(const std::vector<MethodMatching>& matchings,
                                                  const ClassHierarchy& hierarchy,
                                                  const DetectorConfig& config);

}  // namespace churnscope
