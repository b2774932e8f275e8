#include "churnscope/stats_store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>

#include "churnscope/text_util.hpp"

namespace churnscope {

namespace {

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
    std::string msg = what;
    if (db) {
        msg += ": ";
        msg += sqlite3_errmsg(db);
    }
    throw StoreCorrupt(msg);
}

// Prepared statement with scoped lifetime; mirrors the tiny RAII wrappers
// this codebase uses elsewhere instead of a full ORM.
class Stmt {
public:
    Stmt(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
            fail(db, std::string("prepare failed: ") + sql);
    }
    ~Stmt() { sqlite3_finalize(stmt_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int idx, const std::string& value) {
        if (sqlite3_bind_text(stmt_, idx, value.data(), static_cast<int>(value.size()),
                              SQLITE_TRANSIENT) != SQLITE_OK)
            fail(db_, "bind failed");
        return *this;
    }
    Stmt& bind(int idx, int64_t value) {
        if (sqlite3_bind_int64(stmt_, idx, value) != SQLITE_OK) fail(db_, "bind failed");
        return *this;
    }

    /// Advances one row; false when done.
    bool row() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        fail(db_, "step failed");
    }
    /// Runs a statement expected to produce no rows.
    void exec() {
        while (row()) {}
    }

    int64_t col_int(int idx) { return sqlite3_column_int64(stmt_, idx); }
    std::string col_text(int idx) {
        const unsigned char* p = sqlite3_column_text(stmt_, idx);
        return p ? reinterpret_cast<const char*>(p) : "";
    }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

void exec_sql(sqlite3* db, const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown sqlite error";
        sqlite3_free(err);
        throw StoreCorrupt("sql failed (" + std::string(sql) + "): " + msg);
    }
}

}  // namespace

StatsStore StatsStore::open(const std::string& db_path) {
    std::error_code ec;
    std::filesystem::path parent = std::filesystem::path(db_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);

    sqlite3* db = nullptr;
    if (sqlite3_open_v2(db_path.c_str(), &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE,
                        nullptr) != SQLITE_OK) {
        std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
        sqlite3_close(db);
        throw StoreCorrupt("cannot open " + db_path + ": " + msg);
    }
    sqlite3_busy_timeout(db, 5000);

    StatsStore store(db);
    store.init_schema();  // on throw, store's destructor closes the handle
    return store;
}

void StatsStore::init_schema() {
    exec_sql(db_,
             "CREATE TABLE IF NOT EXISTS meta(schema_version int);"
             "CREATE TABLE IF NOT EXISTS processed_commits("
             "  hash text primary key, processed_at int);"
             "CREATE TABLE IF NOT EXISTS method_stats("
             "  id text primary key, file_path text, qualified_name text, total_changes int);"
             "CREATE TABLE IF NOT EXISTS daily_changes("
             "  id text, day text, count int, primary key(id, day));");

    Stmt count(db_, "SELECT COUNT(*), COALESCE(MAX(schema_version), 0) FROM meta");
    count.row();
    int64_t rows = count.col_int(0);
    int64_t version = count.col_int(1);
    if (rows == 0) {
        exec_sql(db_, "INSERT INTO meta(schema_version) VALUES(1)");
    } else if (version != 1) {
        throw StoreCorrupt("unsupported schema_version " + std::to_string(version));
    }
}

StatsStore::StatsStore(StatsStore&& other) noexcept : db_(other.db_) { other.db_ = nullptr; }

StatsStore& StatsStore::operator=(StatsStore&& other) noexcept {
    if (this != &other) {
        sqlite3_close(db_);
        db_ = other.db_;
        other.db_ = nullptr;
    }
    return *this;
}

StatsStore::~StatsStore() { sqlite3_close(db_); }

void StatsStore::begin() { exec_sql(db_, "BEGIN IMMEDIATE"); }
void StatsStore::commit() { exec_sql(db_, "COMMIT"); }
void StatsStore::rollback() { exec_sql(db_, "ROLLBACK"); }

void StatsStore::increment(const MethodIdentity& id, int64_t day, int64_t by) {
    if (by == 0) return;
    std::string canonical = id.canonical();
    Stmt total(db_,
               "INSERT INTO method_stats(id, file_path, qualified_name, total_changes) "
               "VALUES(?1, ?2, ?3, ?4) "
               "ON CONFLICT(id) DO UPDATE SET total_changes = total_changes + ?4");
    total.bind(1, canonical).bind(2, id.file_path).bind(3, id.qualified_name).bind(4, by);
    total.exec();

    Stmt daily(db_,
               "INSERT INTO daily_changes(id, day, count) VALUES(?1, ?2, ?3) "
               "ON CONFLICT(id, day) DO UPDATE SET count = count + ?3");
    daily.bind(1, canonical).bind(2, day_string_from_day_number(day)).bind(3, by);
    daily.exec();
}

void StatsStore::upsert_stats(const MethodStats& stats) {
    for (const auto& [day, count] : stats.daily) increment(stats.identity, day, count);
}

void StatsStore::rekey(const MethodIdentity& from, const MethodIdentity& to) {
    std::string from_id = from.canonical();
    std::vector<std::pair<int64_t, int64_t>> days;
    {
        Stmt sel(db_, "SELECT day, count FROM daily_changes WHERE id = ?1");
        sel.bind(1, from_id);
        while (sel.row()) {
            auto day = day_number_from_string(sel.col_text(0));
            if (day) days.emplace_back(*day, sel.col_int(1));
        }
    }
    {
        Stmt check(db_, "SELECT 1 FROM method_stats WHERE id = ?1");
        check.bind(1, from_id);
        if (!check.row() && days.empty()) return;  // nothing stored: no-op
    }
    remove(from);
    // Re-inserting through increment merges additively when `to` exists
    // and keeps total_changes consistent with the daily rows.
    for (const auto& [day, count] : days) increment(to, day, count);
}

void StatsStore::remove(const MethodIdentity& id) {
    std::string canonical = id.canonical();
    Stmt d1(db_, "DELETE FROM daily_changes WHERE id = ?1");
    d1.bind(1, canonical);
    d1.exec();
    Stmt d2(db_, "DELETE FROM method_stats WHERE id = ?1");
    d2.bind(1, canonical);
    d2.exec();
}

void StatsStore::rekey_file(const std::string& old_path, const std::string& new_path) {
    if (old_path == new_path) return;
    std::vector<std::string> ids;
    {
        Stmt sel(db_, "SELECT id FROM method_stats WHERE file_path = ?1 ORDER BY id");
        sel.bind(1, old_path);
        while (sel.row()) ids.push_back(sel.col_text(0));
    }
    for (const std::string& id : ids) {
        auto identity = identity_from_canonical(id);
        if (!identity) continue;  // unparseable row: leave it alone
        MethodIdentity moved = *identity;
        moved.file_path = new_path;
        rekey(*identity, moved);
    }
}

void StatsStore::mark_processed(const std::string& hash, int64_t processed_at) {
    Stmt ins(db_, "INSERT OR IGNORE INTO processed_commits(hash, processed_at) VALUES(?1, ?2)");
    ins.bind(1, hash).bind(2, processed_at);
    ins.exec();
}

bool StatsStore::is_processed(const std::string& hash) const {
    Stmt sel(db_, "SELECT 1 FROM processed_commits WHERE hash = ?1");
    sel.bind(1, hash);
    return sel.row();
}

int64_t StatsStore::processed_count() const {
    Stmt sel(db_, "SELECT COUNT(*) FROM processed_commits");
    sel.row();
    return sel.col_int(0);
}

namespace {

// Shared row-folding for the windowed queries: rows arrive ordered by id,
// one per (id, day).
std::vector<MethodStats> fold_stats_rows(Stmt& sel) {
    std::vector<MethodStats> out;
    while (sel.row()) {
        std::string id = sel.col_text(0);
        auto identity = identity_from_canonical(id);
        auto day = day_number_from_string(sel.col_text(1));
        if (!identity || !day) continue;
        if (out.empty() || out.back().identity != *identity) {
            MethodStats ms;
            ms.identity = *identity;
            out.push_back(std::move(ms));
        }
        out.back().daily[*day] += sel.col_int(2);
        out.back().total_changes += sel.col_int(2);
    }
    return out;
}

}  // namespace

std::vector<MethodStats> StatsStore::load_file_stats(const std::string& file_path,
                                                     const ReportWindow& window) const {
    Stmt sel(db_,
             "SELECT d.id, d.day, d.count FROM daily_changes d "
             "JOIN method_stats m ON m.id = d.id "
             "WHERE m.file_path = ?1 AND d.day >= ?2 AND d.day <= ?3 "
             "ORDER BY d.id, d.day");
    sel.bind(1, file_path)
        .bind(2, day_string_from_day_number(window.start_day))
        .bind(3, day_string_from_day_number(window.end_day));
    return fold_stats_rows(sel);
}

std::vector<MethodStats> StatsStore::all_stats(const ReportWindow& window) const {
    Stmt sel(db_,
             "SELECT id, day, count FROM daily_changes "
             "WHERE day >= ?1 AND day <= ?2 ORDER BY id, day");
    sel.bind(1, day_string_from_day_number(window.start_day))
        .bind(2, day_string_from_day_number(window.end_day));
    return fold_stats_rows(sel);
}

std::vector<MethodStats> StatsStore::top_hotspots(int n, const ReportWindow& window) const {
    std::vector<MethodStats> stats = all_stats(window);
    // all_stats returns canonical-ascending order, which is exactly the
    // tie-break; stable_sort by total keeps it.
    std::stable_sort(stats.begin(), stats.end(), [](const MethodStats& a, const MethodStats& b) {
        return a.total_changes > b.total_changes;
    });
    if (n >= 0 && stats.size() > static_cast<size_t>(n)) stats.resize(n);
    return stats;
}

StatsStore::PruneResult StatsStore::prune(const ReportWindow& window) {
    PruneResult result;
    exec_sql(db_, "BEGIN IMMEDIATE");
    try {
        {
            Stmt del(db_, "DELETE FROM daily_changes WHERE day < ?1");
            del.bind(1, day_string_from_day_number(window.start_day));
            del.exec();
            result.daily_rows_deleted = sqlite3_changes64(db_);
        }
        exec_sql(db_,
                 "UPDATE method_stats SET total_changes = "
                 "(SELECT COALESCE(SUM(count), 0) FROM daily_changes "
                 " WHERE daily_changes.id = method_stats.id)");
        exec_sql(db_, "DELETE FROM method_stats WHERE total_changes = 0");
        result.methods_deleted = sqlite3_changes64(db_);
        exec_sql(db_, "COMMIT");
    } catch (...) {
        exec_sql(db_, "ROLLBACK");
        throw;
    }
    return result;
}

void StatsStore::wipe() {
    exec_sql(db_,
             "BEGIN IMMEDIATE;"
             "DELETE FROM daily_changes;"
             "DELETE FROM method_stats;"
             "DELETE FROM processed_commits;"
             "COMMIT;");
}

int64_t StatsStore::global_total() const {
    Stmt sel(db_, "SELECT COALESCE(SUM(total_changes), 0) FROM method_stats");
    sel.row();
    return sel.col_int(0);
}

}  // namespace churnscope
