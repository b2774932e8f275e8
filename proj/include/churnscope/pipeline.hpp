#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "churnscope/git_repo.hpp"
#include "churnscope/refactoring.hpp"
#include "churnscope/report.hpp"
#include "churnscope/stats_store.hpp"

namespace churnscope {

struct RunConfig {
    std::string repo_path = ".";
    int64_t days = 7;
    std::optional<int64_t> end_time;     // unix seconds; defaults to now
    std::optional<std::string> db_path;  // defaults to <repo>/.churnscope/stats.db
    DetectorConfig detector;
    int top_n = 10;
    bool rebuild = false;
};

struct ProcessSummary {
    int64_t commits_seen = 0;
    int64_t commits_processed = 0;
    int64_t commits_skipped_cached = 0;
    int64_t files_parsed = 0;
    int64_t parse_failures = 0;
    std::map<std::string, int64_t> events_by_kind;
};

int64_t effective_end_time(const RunConfig& config);
std::string effective_db_path(const RunConfig& config, const RepoHandle& repo);
WindowConfig window_from(const RunConfig& config);

/// Processes one commit inside a single store transaction: per-file parse
/// and exact diff, refactoring detection across the whole commit, plus-one
/// updates for plainly modified methods, refactoring application, and
/// finally mark_processed. A throw rolls the whole commit back.
void process_commit(const CommitMeta& commit, const std::vector<FileChange>& changes,
                    StatsStore& store, const DetectorConfig& detector, ProcessSummary& summary);

/// Runs the scan: enumerate window commits oldest-first, skip already
/// processed hashes, process the rest.
ProcessSummary process_window(const RunConfig& config, RepoHandle& repo, StatsStore& store);

/// Resolves identities to current line numbers by parsing working-tree
/// files on demand (cached per file).
LineResolver working_tree_resolver(const RepoHandle& repo);

/// Repo-relative form of a user-supplied path (absolute or cwd-relative).
/// nullopt when the path lies outside the repository.
std::optional<std::string> repo_relative_path(const RepoHandle& repo, const std::string& path);

}  // namespace churnscope
