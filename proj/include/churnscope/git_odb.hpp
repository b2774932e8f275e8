#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace churnscope {

/// Object database or repository metadata is unreadable/malformed.
struct CorruptRepo : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ObjType { Commit, Tree, Blob, Tag };

struct GitObject {
    ObjType type;
    std::string data;
};

struct TreeEntry {
    uint32_t mode = 0;  // octal file mode as an integer (040000 = directory)
    std::string name;
    std::string oid;  // 40-char hex

    bool is_tree() const { return (mode & 0170000) == 0040000; }
    bool is_gitlink() const { return (mode & 0170000) == 0160000; }
};

/// Read-only access to .git/objects (loose and packed) and .git refs.
/// Never writes. All returned OIDs are lowercase hex.
class ObjectDb {
public:
    explicit ObjectDb(std::string git_dir);

    /// Reads and inflates one object; resolves delta chains. Returns
    /// nullopt when the object does not exist anywhere; throws CorruptRepo
    /// on malformed data.
    std::optional<GitObject> read(const std::string& oid) const;

    /// Resolves "HEAD" or a full ref name ("refs/heads/main") to a commit
    /// OID via loose refs and packed-refs. nullopt for unborn branches.
    std::optional<std::string> resolve_ref(const std::string& name) const;

    std::optional<std::string> head_commit() const { return resolve_ref("HEAD"); }

    const std::string& git_dir() const { return git_dir_; }

    static std::vector<TreeEntry> parse_tree(const std::string& data);

private:
    struct PackFile {
        std::string idx_data;   // whole .idx file
        std::string pack_data;  // whole .pack file
        uint32_t count = 0;
        size_t names_off = 0;
        size_t offsets_off = 0;
        size_t large_off = 0;
    };

    void load_packs() const;
    std::optional<GitObject> read_loose(const std::string& oid) const;
    std::optional<GitObject> read_packed(const std::string& oid) const;
    GitObject read_pack_entry(const PackFile& pack, uint64_t offset, int depth) const;

    std::string git_dir_;
    mutable bool packs_loaded_ = false;
    mutable std::vector<PackFile> packs_;
    // Inflated pack entries by (pack index, byte offset); delta bases are
    // re-read constantly without this. Wiped when it grows too large.
    mutable std::map<std::pair<size_t, uint64_t>, GitObject> pack_cache_;
};

std::string read_file_or_throw(const std::string& path);
std::optional<std::string> read_file_if_exists(const std::string& path);

}  // namespace churnscope
