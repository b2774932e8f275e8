#include "churnscope/refactoring.hpp"

#include <algorithm>

#include "churnscope/similarity.hpp"

namespace churnscope {

const char* to_string(RefactoringKind kind) {
    switch (kind) {
        case RefactoringKind::ExtractMethod: return "extract";
        case RefactoringKind::ExtractAndMove: return "extract-and-move";
        case RefactoringKind::InlineMethod: return "inline";
        case RefactoringKind::RenameMethod: return "rename";
        case RefactoringKind::MoveMethod: return "move";
        case RefactoringKind::PullUpMethod: return "pull-up";
        case RefactoringKind::PushDownMethod: return "push-down";
    }
    return "?";
}

void ClassHierarchy::add(const TypeDecl& type) {
    if (!type.superclass.empty()) super_of_[type.simple_name] = type.superclass;
}

bool ClassHierarchy::is_ancestor(const std::string& ancestor, const std::string& descendant) const {
    std::string cur = descendant;
    for (int hops = 0; hops < 64; ++hops) {  // hop cap doubles as cycle guard
        auto it = super_of_.find(cur);
        if (it == super_of_.end()) return false;
        if (it->second == ancestor) return true;
        cur = it->second;
    }
    return false;
}

namespace {

std::string simple_class_name(const std::string& qualified) {
    size_t dot = qualified.rfind('.');
    return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

// Working view of one commit's churn, pooled across files.
struct Pool {
    std::vector<const MethodDecl*> deleted;
    std::vector<const MethodDecl*> added;
    // Modified pairs, with the token multisets the extract/inline passes
    // score against.
    struct ModifiedPair {
        const MethodDecl* before;
        const MethodDecl* after;
        TokenBag removed;  // before body minus after body
        TokenBag gained;   // after body minus before body
    };
    std::vector<ModifiedPair> modified;

    std::vector<bool> deleted_used;
    std::vector<bool> added_used;
};

struct Candidate {
    double score;
    size_t del_idx;  // index into pool.deleted, or SIZE_MAX
    size_t add_idx;  // index into pool.added, or SIZE_MAX
    size_t mod_idx;  // index into pool.modified (host), or SIZE_MAX
    // Precomputed sort keys so ordering is explicit and cheap.
    std::string key1;
    std::string key2;
};

// score descending, then the keys ascending: deterministic under any input
// permutation.
bool candidate_less(const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.key1 != y.key1) return x.key1 < y.key1;
    return x.key2 < y.key2;
}

}  // namespace

std::vector<RefactoringEvent> detect_refactorings(const std::vector<MethodMatching>& matchings,
                                                  const ClassHierarchy& hierarchy,
                                                  const DetectorConfig& config) {
    Pool pool;
    for (const auto& m : matchings) {
        for (const auto& d : m.unmatched_before) pool.deleted.push_back(&d);
        for (const auto& a : m.unmatched_after) pool.added.push_back(&a);
        for (const auto& [b, a] : m.matched_pairs) {
            if (b.body_tokens == a.body_tokens && b.signature_tokens == a.signature_tokens)
                continue;  // unchanged methods can't host anything
            TokenBag before_bag = make_bag(b.body_tokens);
            TokenBag after_bag = make_bag(a.body_tokens);
            pool.modified.push_back({&b, &a, bag_difference(before_bag, after_bag),
                                     bag_difference(after_bag, before_bag)});
        }
    }
    auto by_canonical = [](const MethodDecl* x, const MethodDecl* y) {
        return x->identity().canonical() < y->identity().canonical();
    };
    std::sort(pool.deleted.begin(), pool.deleted.end(), by_canonical);
    std::sort(pool.added.begin(), pool.added.end(), by_canonical);
    std::sort(pool.modified.begin(), pool.modified.end(),
              [](const Pool::ModifiedPair& x, const Pool::ModifiedPair& y) {
                  return x.after->identity().canonical() < y.after->identity().canonical();
              });
    pool.deleted_used.assign(pool.deleted.size(), false);
    pool.added_used.assign(pool.added.size(), false);

    std::vector<TokenBag> deleted_bags, added_bags;
    deleted_bags.reserve(pool.deleted.size());
    added_bags.reserve(pool.added.size());
    for (const auto* d : pool.deleted) deleted_bags.push_back(make_bag(d->body_tokens));
    for (const auto* a : pool.added) added_bags.push_back(make_bag(a->body_tokens));

    std::vector<RefactoringEvent> events;

    // Consumes a sorted candidate list greedily, skipping entries whose
    // deleted/added method was already claimed by a better-scoring one.
    auto consume = [&](std::vector<Candidate>& cands, auto&& emit) {
        std::sort(cands.begin(), cands.end(), candidate_less);
        for (const Candidate& c : cands) {
            if (c.del_idx != SIZE_MAX && pool.deleted_used[c.del_idx]) continue;
            if (c.add_idx != SIZE_MAX && pool.added_used[c.add_idx]) continue;
            if (c.del_idx != SIZE_MAX) pool.deleted_used[c.del_idx] = true;
            if (c.add_idx != SIZE_MAX) pool.added_used[c.add_idx] = true;
            emit(c);
        }
    };

    // Pass 1: same name and params, different class -> move family.
    {
        std::vector<Candidate> cands;
        for (size_t di = 0; di < pool.deleted.size(); ++di) {
            const MethodDecl* d = pool.deleted[di];
            for (size_t ai = 0; ai < pool.added.size(); ++ai) {
                const MethodDecl* a = pool.added[ai];
                if (d->method_name() != a->method_name() || d->param_types != a->param_types ||
                    d->enclosing_class == a->enclosing_class)
                    continue;
                double score = dice_coefficient(deleted_bags[di], added_bags[ai]);
                if (score < config.move_threshold) continue;
                cands.push_back({score, di, ai, SIZE_MAX, a->identity().canonical(),
                                 d->identity().canonical()});
            }
        }
        consume(cands, [&](const Candidate& c) {
            const MethodDecl* d = pool.deleted[c.del_idx];
            const MethodDecl* a = pool.added[c.add_idx];
            std::string from = simple_class_name(d->enclosing_class);
            std::string to = simple_class_name(a->enclosing_class);
            RefactoringKind kind = RefactoringKind::MoveMethod;
            if (hierarchy.is_ancestor(to, from)) kind = RefactoringKind::PullUpMethod;
            else if (hierarchy.is_ancestor(from, to)) kind = RefactoringKind::PushDownMethod;
            events.push_back({kind, d->identity(), a->identity(), std::nullopt});
        });
    }

    // Pass 2: renames inside one class. Ties go to the lexicographically
    // smallest new name.
    {
        std::vector<Candidate> cands;
        for (size_t di = 0; di < pool.deleted.size(); ++di) {
            if (pool.deleted_used[di]) continue;
            const MethodDecl* d = pool.deleted[di];
            for (size_t ai = 0; ai < pool.added.size(); ++ai) {
                if (pool.added_used[ai]) continue;
                const MethodDecl* a = pool.added[ai];
                if (d->enclosing_class != a->enclosing_class) continue;
                double score = dice_coefficient(deleted_bags[di], added_bags[ai]);
                if (score < config.rename_threshold) continue;
                cands.push_back({score, di, ai, SIZE_MAX,
                                 a->method_name() + "\x1f" + a->identity().canonical(),
                                 d->identity().canonical()});
            }
        }
        consume(cands, [&](const Candidate& c) {
            events.push_back({RefactoringKind::RenameMethod, pool.deleted[c.del_idx]->identity(),
                              pool.added[c.add_idx]->identity(), std::nullopt});
        });
    }

    // Pass 3: extractions. An added method whose tokens mostly come from
    // what a modified method lost was split out of it.
    {
        std::vector<Candidate> cands;
        for (size_t ai = 0; ai < pool.added.size(); ++ai) {
            if (pool.added_used[ai]) continue;
            for (size_t mi = 0; mi < pool.modified.size(); ++mi) {
                double score = containment(added_bags[ai], pool.modified[mi].removed);
                if (score < config.containment_threshold) continue;
                cands.push_back({score, SIZE_MAX, ai, mi, pool.added[ai]->identity().canonical(),
                                 pool.modified[mi].after->identity().canonical()});
            }
        }
        consume(cands, [&](const Candidate& c) {
            const MethodDecl* a = pool.added[c.add_idx];
            const Pool::ModifiedPair& host = pool.modified[c.mod_idx];
            RefactoringKind kind = a->enclosing_class == host.after->enclosing_class
                                       ? RefactoringKind::ExtractMethod
                                       : RefactoringKind::ExtractAndMove;
            events.push_back({kind, std::nullopt, a->identity(), host.after->identity()});
        });
    }

    // Pass 4: inlines, the mirror image: a deleted method whose tokens
    // mostly reappear in what a modified method gained.
    {
        std::vector<Candidate> cands;
        for (size_t di = 0; di < pool.deleted.size(); ++di) {
            if (pool.deleted_used[di]) continue;
            for (size_t mi = 0; mi < pool.modified.size(); ++mi) {
                double score = containment(deleted_bags[di], pool.modified[mi].gained);
                if (score < config.containment_threshold) continue;
                cands.push_back({score, di, SIZE_MAX, mi, pool.deleted[di]->identity().canonical(),
                                 pool.modified[mi].after->identity().canonical()});
            }
        }
        consume(cands, [&](const Candidate& c) {
            const MethodDecl* d = pool.deleted[c.del_idx];
            const Pool::ModifiedPair& host = pool.modified[c.mod_idx];
            // after repeats the deleted identity; the model update only
            // needs before and host.
            events.push_back({RefactoringKind::InlineMethod, d->identity(), d->identity(),
                              host.after->identity()});
        });
    }

    // Pass 5: simultaneous rename + move. Anything still unclaimed that is
    // near-identical across classes kept its statistics-worthy identity.
    {
        std::vector<Candidate> cands;
        for (size_t di = 0; di < pool.deleted.size(); ++di) {
            if (pool.deleted_used[di]) continue;
            const MethodDecl* d = pool.deleted[di];
            for (size_t ai = 0; ai < pool.added.size(); ++ai) {
                if (pool.added_used[ai]) continue;
                const MethodDecl* a = pool.added[ai];
                if (d->enclosing_class == a->enclosing_class) continue;
                double score = dice_coefficient(deleted_bags[di], added_bags[ai]);
                if (score < config.rename_move_threshold) continue;
                cands.push_back({score, di, ai, SIZE_MAX, a->identity().canonical(),
                                 d->identity().canonical()});
            }
        }
        consume(cands, [&](const Candidate& c) {
            events.push_back({RefactoringKind::MoveMethod, pool.deleted[c.del_idx]->identity(),
                              pool.added[c.add_idx]->identity(), std::nullopt});
        });
    }

    return events;
}

}  // namespace churnscope
