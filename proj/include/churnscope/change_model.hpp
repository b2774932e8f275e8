#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "churnscope/java_parser.hpp"
#include "churnscope/refactoring.hpp"

namespace churnscope {

/// Aggregated change counts for one method. Days are counted as UTC
/// calendar days since the epoch (see text_util).
struct MethodStats {
    MethodIdentity identity;
    int64_t total_changes = 0;
    std::map<int64_t, int64_t> daily;  // day number -> count, all positive
};

/// The day range reports and queries operate over: the `days` UTC calendar
/// days ending on the day containing `end_time`, both ends inclusive.
struct ReportWindow {
    int64_t days = 7;
    int64_t end_time = 0;  // UTC seconds
    int64_t start_day = 0;
    int64_t end_day = 0;

    static ReportWindow make(int64_t days, int64_t end_time);
    bool contains(int64_t day) const { return day >= start_day && day <= end_day; }
};

/// Mutation interface shared by the in-memory model and the SQLite-backed
/// store, so the refactoring update rules are written exactly once.
class StatsSink {
public:
    virtual ~StatsSink() = default;
    /// Adds `by` to the method's count on `day`, creating stats if absent.
    virtual void increment(const MethodIdentity& id, int64_t day, int64_t by) = 0;
    /// Moves all counts from `from` to `to`, merging additively if `to`
    /// exists. Missing `from` is a no-op.
    virtual void rekey(const MethodIdentity& from, const MethodIdentity& to) = 0;
    /// Drops all counts for `id`. Missing `id` is a no-op.
    virtual void remove(const MethodIdentity& id) = 0;
};

/// In-memory statistics model: file path -> identity -> stats.
class ChangeModel : public StatsSink {
public:
    void increment(const MethodIdentity& id, int64_t day, int64_t by) override;
    void rekey(const MethodIdentity& from, const MethodIdentity& to) override;
    void remove(const MethodIdentity& id) override;

    const MethodStats* find(const MethodIdentity& id) const;
    /// All stats across files, ordered by canonical identity.
    std::vector<MethodStats> all_stats() const;
    std::vector<MethodStats> file_stats(const std::string& file_path) const;
    int64_t total_sum() const;

private:
    // identity.file_path always equals the outer key.
    std::map<std::string, std::map<MethodIdentity, MethodStats>> files_;
};

/// Applies detected refactoring events to a stats sink:
///   extract / extract-and-move: fresh stats for the new method, count 1
///     on the commit's day
///   inline: stats of the inlined method deleted, host incremented by 1
///   rename / move / pull-up / push-down: stats re-keyed, history kept,
///     plus 1 on the commit's day when count_renames is set
/// An event whose `before` is unknown to the model simply starts fresh:
/// rekey of a missing key is a no-op and the increment creates the row.
void apply_refactorings(StatsSink& sink, const std::vector<RefactoringEvent>& events,
                        int64_t commit_day, bool count_renames);

}  // namespace churnscope
