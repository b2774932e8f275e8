#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "churnscope/git_odb.hpp"

namespace churnscope {

/// No Git repository was found at or above the given path.
struct NoVcsRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommitMeta {
    std::string hash;  // 40-char lowercase hex
    std::string author;
    int64_t timestamp = 0;  // author time, UTC seconds since epoch
    std::vector<std::string> parent_hashes;
    std::string message;
};

struct WindowConfig {
    int64_t days = 7;
    int64_t end_time = 0;  // UTC seconds; the CLI defaults this to now
    std::set<std::string> source_extensions = {".java"};

    int64_t start_time() const { return end_time - days * 86400; }
};

struct FileChange {
    enum class Kind { Added, Deleted, Modified, Renamed };
    Kind kind = Kind::Modified;
    std::optional<std::string> path_before;
    std::optional<std::string> path_after;
    std::optional<std::string> content_before;
    std::optional<std::string> content_after;
};

const char* to_string(FileChange::Kind kind);

/// Read-only handle to one Git repository (found by walking upward from
/// the opened path, like the git CLI does).
class RepoHandle {
public:
    static RepoHandle open(const std::string& path);  // throws NoVcsRoot

    const std::string& root() const { return root_; }
    const std::string& git_dir() const { return git_dir_; }

    /// Head commit of the checked-out branch; nullopt on an unborn branch.
    std::optional<std::string> head_commit() const;

    CommitMeta read_commit(const std::string& oid) const;

    /// First-parent commits reachable from head whose timestamp falls in
    /// the closed interval [end_time - days*86400, end_time], ordered by
    /// (timestamp, hash) ascending. Merge commits appear once.
    std::vector<CommitMeta> list_commits(const WindowConfig& window) const;

    /// Changed source files of one commit, diffed against its first parent
    /// (or the empty tree for a root commit). Extension-filtered, binary
    /// blobs skipped, file renames detected by line similarity. Ordered by
    /// the post-change path (pre-change for deletions).
    std::vector<FileChange> commit_file_changes(const CommitMeta& commit,
                                                const WindowConfig& window) const;

private:
    RepoHandle(std::string root, std::string git_dir)
        : root_(std::move(root)), git_dir_(git_dir), odb_(std::move(git_dir)) {}

    std::string root_;
    std::string git_dir_;
    ObjectDb odb_;
};

}  // namespace churnscope
