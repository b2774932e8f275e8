#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "churnscope/change_model.hpp"

struct sqlite3;

namespace churnscope {

/// The statistics database is unreadable, not a database, or has an
/// unsupported schema version.
struct StoreCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// SQLite-backed persistent statistics. One database per analyzed
/// repository. All-time counts are stored; windows are applied at query
/// time so widening the window later needs no re-scan.
///
/// Schema (version 1):
///   meta(schema_version int)
///   processed_commits(hash text primary key, processed_at int)
///   method_stats(id text primary key, file_path text, qualified_name text,
///                total_changes int)
///   daily_changes(id text, day text, count int, primary key(id, day))
/// `id` is the canonical identity string; `day` is "YYYY-MM-DD" (UTC).
class StatsStore : public StatsSink {
public:
    static StatsStore open(const std::string& db_path);  // throws StoreCorrupt

    StatsStore(StatsStore&& other) noexcept;
    StatsStore& operator=(StatsStore&& other) noexcept;
    StatsStore(const StatsStore&) = delete;
    StatsStore& operator=(const StatsStore&) = delete;
    ~StatsStore() override;

    // One transaction per processed commit: everything between begin() and
    // commit() lands atomically, with mark_processed as the last write.
    void begin();
    void commit();
    void rollback();

    // StatsSink: used by the refactoring update rules.
    void increment(const MethodIdentity& id, int64_t day, int64_t by) override;
    void rekey(const MethodIdentity& from, const MethodIdentity& to) override;
    void remove(const MethodIdentity& id) override;

    /// Additive merge of a whole stats record (insert-or-accumulate).
    void upsert_stats(const MethodStats& stats);

    /// Re-keys every stored identity under one file path to another path
    /// (file rename support). Counts merge additively on collision.
    void rekey_file(const std::string& old_path, const std::string& new_path);

    void mark_processed(const std::string& hash, int64_t processed_at);  // idempotent
    bool is_processed(const std::string& hash) const;
    int64_t processed_count() const;

    /// Stats for one file, window-filtered; ordered by canonical identity.
    std::vector<MethodStats> load_file_stats(const std::string& file_path,
                                             const ReportWindow& window) const;
    /// All stats with any in-window changes; ordered by canonical identity.
    std::vector<MethodStats> all_stats(const ReportWindow& window) const;
    /// Top n by in-window total descending, ties by canonical id ascending.
    std::vector<MethodStats> top_hotspots(int n, const ReportWindow& window) const;

    struct PruneResult {
        int64_t daily_rows_deleted = 0;
        int64_t methods_deleted = 0;
    };
    /// Deletes daily rows older than the window and drops methods left
    /// with no recorded changes. Processed-commit hashes are kept.
    PruneResult prune(const ReportWindow& window);

    /// Drops all statistics and processed hashes (schema kept); used by
    /// full re-scans.
    void wipe();

    /// Sum of total_changes over every stored method (all-time).
    int64_t global_total() const;

private:
    explicit StatsStore(sqlite3* db) : db_(db) {}
    void init_schema();

    sqlite3* db_ = nullptr;
};

}  // namespace churnscope
