#include "churnscope/pipeline.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>

#include "churnscope/change_model.hpp"
#include "churnscope/method_diff.hpp"
#include "churnscope/text_util.hpp"

namespace fs = std::filesystem;

namespace churnscope {

int64_t effective_end_time(const RunConfig& config) {
    return config.end_time ? *config.end_time : static_cast<int64_t>(std::time(nullptr));
}

std::string effective_db_path(const RunConfig& config, const RepoHandle& repo) {
    if (config.db_path) return *config.db_path;
    return repo.root() + "/.churnscope/stats.db";
}

WindowConfig window_from(const RunConfig& config) {
    WindowConfig w;
    w.days = config.days;
    w.end_time = effective_end_time(config);
    return w;
}

void process_commit(const CommitMeta& commit, const std::vector<FileChange>& changes,
                    StatsStore& store, const DetectorConfig& detector, ProcessSummary& summary) {
    int64_t day = unix_to_day_number(commit.timestamp);

    store.begin();
    try {
        std::vector<MethodMatching> matchings;
        ClassHierarchy hierarchy;

        for (const FileChange& fc : changes) {
            // A renamed file first re-keys everything stored under its old
            // path, then diffs both revisions under the new path, so plain
            // file moves preserve identity without any per-method events.
            if (fc.kind == FileChange::Kind::Renamed)
                store.rekey_file(*fc.path_before, *fc.path_after);

            const std::string& before_path =
                fc.path_after ? *fc.path_after : *fc.path_before;
            ParseResult before = fc.content_before
                                     ? extract_methods(*fc.content_before, before_path)
                                     : ParseResult{};
            ParseResult after = fc.content_after
                                    ? extract_methods(*fc.content_after, *fc.path_after)
                                    : ParseResult{};
            if (before.degraded || after.degraded) {
                ++summary.parse_failures;
                continue;
            }
            ++summary.files_parsed;
            for (const TypeDecl& t : before.types) hierarchy.add(t);
            for (const TypeDecl& t : after.types) hierarchy.add(t);
            matchings.push_back(match_methods(before.methods, after.methods));
        }

        std::vector<RefactoringEvent> events =
            detect_refactorings(matchings, hierarchy, detector);

        // Inline hosts get their +1 from the inline rule; counting them as
        // plainly modified too would double-count the commit.
        std::set<std::string> inline_hosts;
        for (const RefactoringEvent& e : events) {
            if (e.kind == RefactoringKind::InlineMethod && e.host)
                inline_hosts.insert(e.host->canonical());
        }

        for (const MethodMatching& matching : matchings) {
            for (const MethodChange& change : classify_changes(matching)) {
                if (change.kind != ChangeKind::Modified) continue;
                if (inline_hosts.count(change.identity.canonical())) continue;
                store.increment(change.identity, day, 1);
            }
        }

        apply_refactorings(store, events, day, detector.count_renames);
        for (const RefactoringEvent& e : events) ++summary.events_by_kind[to_string(e.kind)];

        store.mark_processed(commit.hash, static_cast<int64_t>(std::time(nullptr)));
        store.commit();
    } catch (...) {
        store.rollback();
        throw;
    }
}

ProcessSummary process_window(const RunConfig& config, RepoHandle& repo, StatsStore& store) {
    ProcessSummary summary;
    if (config.rebuild) store.wipe();

    WindowConfig window = window_from(config);
    std::vector<CommitMeta> commits = repo.list_commits(window);
    summary.commits_seen = static_cast<int64_t>(commits.size());

    for (const CommitMeta& commit : commits) {
        if (store.is_processed(commit.hash)) {
            ++summary.commits_skipped_cached;
            continue;
        }
        std::vector<FileChange> changes = repo.commit_file_changes(commit, window);
        process_commit(commit, changes, store, config.detector, summary);
        ++summary.commits_processed;
    }
    return summary;
}

LineResolver working_tree_resolver(const RepoHandle& repo) {
    // method canonical id -> line, one cache entry per file, built lazily
    auto cache = std::make_shared<std::map<std::string, std::map<std::string, int>>>();
    std::string root = repo.root();

    return [cache, root](const MethodIdentity& id) -> int {
        auto it = cache->find(id.file_path);
        if (it == cache->end()) {
            std::map<std::string, int> lines;
            std::ifstream f(root + "/" + id.file_path, std::ios::binary);
            if (f) {
                std::string source((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
                ParseResult parsed = extract_methods(sanitize_utf8(source), id.file_path);
                for (const MethodDecl& m : parsed.methods)
                    lines[m.identity().canonical()] = m.start_line;
            }
            it = cache->emplace(id.file_path, std::move(lines)).first;
        }
        auto line_it = it->second.find(id.canonical());
        return line_it == it->second.end() ? 0 : line_it->second;
    };
}

std::optional<std::string> repo_relative_path(const RepoHandle& repo, const std::string& path) {
    std::error_code ec;
    fs::path abs = fs::weakly_canonical(fs::absolute(path, ec), ec);
    if (ec) return std::nullopt;
    fs::path rel = abs.lexically_relative(repo.root());
    std::string rel_str = rel.generic_string();
    if (rel_str.empty() || rel_str == "." || rel_str.rfind("..", 0) == 0) return std::nullopt;
    return rel_str;
}

}  // namespace churnscope
