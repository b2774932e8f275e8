#include "churnscope/git_repo.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>

#include "churnscope/similarity.hpp"
#include "churnscope/text_util.hpp"

namespace fs = std::filesystem;

namespace churnscope {

const char* to_string(FileChange::Kind kind) {
    switch (kind) {
        case FileChange::Kind::Added: return "added";
        case FileChange::Kind::Deleted: return "deleted";
        case FileChange::Kind::Modified: return "modified";
        case FileChange::Kind::Renamed: return "renamed";
    }
    return "?";
}

namespace {

// Raw commit object fields this module needs beyond CommitMeta.
struct RawCommit {
    std::string tree;
    std::vector<std::string> parents;
    std::string author;
    int64_t author_time = 0;
    std::string message;
};

RawCommit parse_commit_object(const std::string& data, const std::string& oid) {
    RawCommit rc;
    size_t pos = 0;
    while (pos < data.size()) {
        size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) break;  // headers end, message follows

        if (line.rfind("tree ", 0) == 0) {
            rc.tree = line.substr(5);
        } else if (line.rfind("parent ", 0) == 0) {
            rc.parents.push_back(line.substr(7));
        } else if (line.rfind("author ", 0) == 0) {
            // "author Name <email> 1234567890 +0000"
            size_t lt = line.rfind('<');
            size_t gt = line.rfind('>');
            if (lt == std::string::npos || gt == std::string::npos || gt < lt)
                throw CorruptRepo("malformed author line in commit " + oid);
            rc.author = line.substr(7, lt > 8 ? lt - 8 : 0);
            size_t ts_start = gt + 2;
            if (ts_start < line.size())
                rc.author_time = std::strtoll(line.c_str() + ts_start, nullptr, 10);
        }
        // committer/gpgsig/encoding headers are irrelevant here
    }
    rc.message = pos <= data.size() ? data.substr(std::min(pos, data.size())) : "";
    if (rc.tree.size() != 40) throw CorruptRepo("commit without tree: " + oid);
    return rc;
}

bool has_source_extension(const std::string& path, const std::set<std::string>& extensions) {
    for (const auto& ext : extensions) {
        if (path.size() > ext.size() &&
            path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
            return true;
    }
    return false;
}

// Fraction of identical lines between two texts, relative to the larger
// one. Drives file-rename detection.
double line_similarity(const std::string& a, const std::string& b) {
    if (a == b) return 1.0;
    std::vector<std::string> la = split_lines(a);
    std::vector<std::string> lb = split_lines(b);
    size_t bigger = std::max(la.size(), lb.size());
    if (bigger == 0) return 1.0;
    TokenBag ba = make_bag(la);
    TokenBag bb = make_bag(lb);
    return static_cast<double>(bag_intersection(ba, bb)) / static_cast<double>(bigger);
}

}  // namespace

RepoHandle RepoHandle::open(const std::string& path) {
    std::error_code ec;
    fs::path p = fs::absolute(path, ec);
    if (ec || !fs::exists(p)) throw NoVcsRoot("path does not exist: " + path);
    p = fs::canonical(p, ec);
    if (ec) throw NoVcsRoot("path is not accessible: " + path);

    for (fs::path dir = p;; dir = dir.parent_path()) {
        fs::path marker = dir / ".git";
        if (fs::is_directory(marker)) {
            return RepoHandle(dir.string(), marker.string());
        }
        if (fs::is_regular_file(marker)) {
            // worktree-style ".git" file: "gitdir: <path>"
            std::string content = read_file_or_throw(marker.string());
            while (!content.empty() && (content.back() == '\n' || content.back() == '\r'))
                content.pop_back();
            if (content.rfind("gitdir: ", 0) == 0) {
                fs::path gd = content.substr(8);
                if (gd.is_relative()) gd = dir / gd;
                return RepoHandle(dir.string(), gd.lexically_normal().string());
            }
        }
        if (dir == dir.parent_path()) break;
    }
    throw NoVcsRoot("no git repository found at or above " + path);
}

std::optional<std::string> RepoHandle::head_commit() const { return odb_.head_commit(); }

CommitMeta RepoHandle::read_commit(const std::string& oid) const {
    auto obj = odb_.read(oid);
    if (!obj || obj->type != ObjType::Commit) throw CorruptRepo("not a commit: " + oid);
    RawCommit rc = parse_commit_object(obj->data, oid);
    CommitMeta meta;
    meta.hash = oid;
    meta.author = rc.author;
    meta.timestamp = rc.author_time;
    meta.parent_hashes = rc.parents;
    meta.message = rc.message;
    return meta;
}

std::vector<CommitMeta> RepoHandle::list_commits(const WindowConfig& window) const {
    std::vector<CommitMeta> in_window;
    auto head = head_commit();
    if (!head) return in_window;

    std::set<std::string> visited;
    std::string cur = *head;
    while (!cur.empty() && visited.insert(cur).second) {
        CommitMeta meta = read_commit(cur);
        std::string next = meta.parent_hashes.empty() ? "" : meta.parent_hashes[0];
        if (meta.timestamp >= window.start_time() && meta.timestamp <= window.end_time)
            in_window.push_back(std::move(meta));
        cur = next;
    }
    std::sort(in_window.begin(), in_window.end(), [](const CommitMeta& a, const CommitMeta& b) {
        return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.hash < b.hash;
    });
    return in_window;
}

std::vector<FileChange> RepoHandle::commit_file_changes(const CommitMeta& commit,
                                                        const WindowConfig& window) const {
    auto obj = odb_.read(commit.hash);
    if (!obj || obj->type != ObjType::Commit) throw CorruptRepo("not a commit: " + commit.hash);
    RawCommit rc = parse_commit_object(obj->data, commit.hash);

    std::string before_tree;
    if (!rc.parents.empty()) {
        auto parent = odb_.read(rc.parents[0]);
        if (!parent || parent->type != ObjType::Commit)
            throw CorruptRepo("missing parent of " + commit.hash);
        before_tree = parse_commit_object(parent->data, rc.parents[0]).tree;
    }

    // path -> (blob before, blob after); empty string = absent on that side
    std::map<std::string, std::pair<std::string, std::string>> touched;

    auto read_tree_entries = [&](const std::string& tree_oid) {
        auto tree = odb_.read(tree_oid);
        if (!tree || tree->type != ObjType::Tree) throw CorruptRepo("not a tree: " + tree_oid);
        return ObjectDb::parse_tree(tree->data);
    };

    // Emits every blob under a tree as one-sided (all-added or all-deleted).
    std::function<void(const std::string&, const std::string&, bool)> emit_all =
        [&](const std::string& tree_oid, const std::string& prefix, bool as_before) {
            for (const TreeEntry& e : read_tree_entries(tree_oid)) {
                if (e.is_gitlink()) continue;
                std::string path = prefix + e.name;
                if (e.is_tree()) {
                    emit_all(e.oid, path + "/", as_before);
                } else {
                    auto& slot = touched[path];
                    (as_before ? slot.first : slot.second) = e.oid;
                }
            }
        };

    std::function<void(const std::string&, const std::string&, const std::string&)> diff_trees =
        [&](const std::string& old_oid, const std::string& new_oid, const std::string& prefix) {
            if (old_oid == new_oid) return;  // identical subtrees: nothing below changed
            std::map<std::string, TreeEntry> old_entries, new_entries;
            if (!old_oid.empty())
                for (auto& e : read_tree_entries(old_oid)) old_entries.emplace(e.name, std::move(e));
            if (!new_oid.empty())
                for (auto& e : read_tree_entries(new_oid)) new_entries.emplace(e.name, std::move(e));

            auto io = old_entries.begin();
            auto in = new_entries.begin();
            while (io != old_entries.end() || in != new_entries.end()) {
                int cmp = io == old_entries.end()   ? 1
                          : in == new_entries.end() ? -1
                          : io->first.compare(in->first) < 0 ? -1
                          : io->first == in->first           ? 0
                                                             : 1;
                if (cmp < 0) {
                    const TreeEntry& e = io->second;
                    if (!e.is_gitlink()) {
                        if (e.is_tree()) emit_all(e.oid, prefix + e.name + "/", true);
                        else touched[prefix + e.name].first = e.oid;
                    }
                    ++io;
                } else if (cmp > 0) {
                    const TreeEntry& e = in->second;
                    if (!e.is_gitlink()) {
                        if (e.is_tree()) emit_all(e.oid, prefix + e.name + "/", false);
                        else touched[prefix + e.name].second = e.oid;
                    }
                    ++in;
                } else {
                    const TreeEntry& oe = io->second;
                    const TreeEntry& ne = in->second;
                    std::string path = prefix + oe.name;
                    if (oe.is_gitlink() || ne.is_gitlink()) {
                        // submodule on either side: out of scope
                    } else if (oe.is_tree() && ne.is_tree()) {
                        diff_trees(oe.oid, ne.oid, path + "/");
                    } else if (oe.is_tree() != ne.is_tree()) {
                        // file replaced by directory or vice versa
                        if (oe.is_tree()) emit_all(oe.oid, path + "/", true);
                        else touched[path].first = oe.oid;
                        if (ne.is_tree()) emit_all(ne.oid, path + "/", false);
                        else touched[path].second = ne.oid;
                    } else if (oe.oid != ne.oid) {
                        touched[path] = {oe.oid, ne.oid};
                    }
                    ++io;
                    ++in;
                }
            }
        };

    diff_trees(before_tree, rc.tree, "");

    auto read_text_blob = [&](const std::string& oid) -> std::optional<std::string> {
        auto blob = odb_.read(oid);
        if (!blob || blob->type != ObjType::Blob) throw CorruptRepo("not a blob: " + oid);
        if (is_probably_binary(blob->data)) return std::nullopt;
        return sanitize_utf8(blob->data);
    };

    std::vector<FileChange> added, deleted, modified;
    for (const auto& [path, oids] : touched) {
        if (!has_source_extension(path, window.source_extensions)) continue;
        const auto& [old_oid, new_oid] = oids;
        if (old_oid == new_oid) continue;  // add+delete of identical blob via dir/file swap

        FileChange fc;
        if (old_oid.empty()) {
            auto content = read_text_blob(new_oid);
            if (!content) continue;
            fc.kind = FileChange::Kind::Added;
            fc.path_after = path;
            fc.content_after = std::move(*content);
            added.push_back(std::move(fc));
        } else if (new_oid.empty()) {
            auto content = read_text_blob(old_oid);
            if (!content) continue;
            fc.kind = FileChange::Kind::Deleted;
            fc.path_before = path;
            fc.content_before = std::move(*content);
            deleted.push_back(std::move(fc));
        } else {
            auto before = read_text_blob(old_oid);
            auto after = read_text_blob(new_oid);
            if (!before || !after) continue;  // binary on either side
            fc.kind = FileChange::Kind::Modified;
            fc.path_before = path;
            fc.path_after = path;
            fc.content_before = std::move(*before);
            fc.content_after = std::move(*after);
            modified.push_back(std::move(fc));
        }
    }

    // Rename detection: greedily pair deleted and added files that share
    // at least 60% of their lines.
    struct RenamePair {
        double score;
        size_t del_idx;
        size_t add_idx;
    };
    std::vector<RenamePair> pairs;
    for (size_t di = 0; di < deleted.size(); ++di) {
        for (size_t ai = 0; ai < added.size(); ++ai) {
            double score = line_similarity(*deleted[di].content_before, *added[ai].content_after);
            if (score >= 0.60) pairs.push_back({score, di, ai});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const RenamePair& x, const RenamePair& y) {
        if (x.score != y.score) return x.score > y.score;
        if (*deleted[x.del_idx].path_before != *deleted[y.del_idx].path_before)
            return *deleted[x.del_idx].path_before < *deleted[y.del_idx].path_before;
        return *added[x.add_idx].path_after < *added[y.add_idx].path_after;
    });
    std::vector<bool> del_used(deleted.size(), false), add_used(added.size(), false);
    std::vector<FileChange> renamed;
    for (const RenamePair& rp : pairs) {
        if (del_used[rp.del_idx] || add_used[rp.add_idx]) continue;
        del_used[rp.del_idx] = true;
        add_used[rp.add_idx] = true;
        FileChange fc;
        fc.kind = FileChange::Kind::Renamed;
        fc.path_before = deleted[rp.del_idx].path_before;
        fc.content_before = std::move(deleted[rp.del_idx].content_before);
        fc.path_after = added[rp.add_idx].path_after;
        fc.content_after = std::move(added[rp.add_idx].content_after);
        renamed.push_back(std::move(fc));
    }

    std::vector<FileChange> result;
    for (size_t i = 0; i < deleted.size(); ++i)
        if (!del_used[i]) result.push_back(std::move(deleted[i]));
    for (size_t i = 0; i < added.size(); ++i)
        if (!add_used[i]) result.push_back(std::move(added[i]));
    for (auto& fc : modified) result.push_back(std::move(fc));
    for (auto& fc : renamed) result.push_back(std::move(fc));

    std::sort(result.begin(), result.end(), [](const FileChange& a, const FileChange& b) {
        const std::string& ka = a.path_after ? *a.path_after : *a.path_before;
        const std::string& kb = b.path_after ? *b.path_after : *b.path_before;
        return ka < kb;
    });
    return result;
}

}  // namespace churnscope
