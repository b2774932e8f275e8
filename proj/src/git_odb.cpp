#include "churnscope/git_odb.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace churnscope {

namespace {

std::string inflate_all(const unsigned char* in, size_t in_len, const std::string& what) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw CorruptRepo("zlib init failed for " + what);
    std::string out;
    unsigned char buf[65536];
    zs.next_in = const_cast<unsigned char*>(in);
    zs.avail_in = static_cast<uInt>(in_len);
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw CorruptRepo("zlib inflate failed for " + what);
        }
        out.append(reinterpret_cast<char*>(buf), sizeof(buf) - zs.avail_out);
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw CorruptRepo("truncated zlib stream in " + what);
        }
    }
    inflateEnd(&zs);
    return out;
}

uint32_t be32(const std::string& s, size_t off) {
    return (static_cast<uint32_t>(static_cast<unsigned char>(s[off])) << 24) |
           (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 1])) << 16) |
           (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 2])) << 8) |
           static_cast<uint32_t>(static_cast<unsigned char>(s[off + 3]));
}

uint64_t be64(const std::string& s, size_t off) {
    return (static_cast<uint64_t>(be32(s, off)) << 32) | be32(s, off + 4);
}

std::string to_hex(const unsigned char* bin, size_t n) {
    static const char digits[] = "0123456789abcdef";
    std::string hex(n * 2, '0');
    for (size_t i = 0; i < n; ++i) {
        hex[2 * i] = digits[bin[i] >> 4];
        hex[2 * i + 1] = digits[bin[i] & 15];
    }
    return hex;
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string from_hex(const std::string& hex) {
    std::string bin(hex.size() / 2, '\0');
    for (size_t i = 0; i + 1 < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw CorruptRepo("bad hex oid: " + hex);
        bin[i / 2] = static_cast<char>((hi << 4) | lo);
    }
    return bin;
}

ObjType type_from_name(const std::string& name, const std::string& what) {
    if (name == "commit") return ObjType::Commit;
    if (name == "tree") return ObjType::Tree;
    if (name == "blob") return ObjType::Blob;
    if (name == "tag") return ObjType::Tag;
    throw CorruptRepo("unknown object type '" + name + "' in " + what);
}

// Pack entry types (pack format): 1..4 are the real objects, 6/7 deltas.
constexpr int kOfsDelta = 6;
constexpr int kRefDelta = 7;

uint64_t read_delta_size(const std::string& d, size_t& i) {
    uint64_t size = 0;
    int shift = 0;
    while (i < d.size()) {
        unsigned char c = static_cast<unsigned char>(d[i++]);
        size |= static_cast<uint64_t>(c & 0x7f) << shift;
        shift += 7;
        if (!(c & 0x80)) break;
    }
    return size;
}

std::string apply_delta(const std::string& base, const std::string& delta) {
    size_t i = 0;
    uint64_t src_size = read_delta_size(delta, i);
    uint64_t tgt_size = read_delta_size(delta, i);
    if (src_size != base.size()) throw CorruptRepo("delta base size mismatch");

    std::string out;
    out.reserve(tgt_size);
    while (i < delta.size()) {
        unsigned char op = static_cast<unsigned char>(delta[i++]);
        if (op & 0x80) {
            // copy from base: offset/size follow in the bytes selected by
            // the low opcode bits
            uint64_t off = 0, len = 0;
            for (int b = 0; b < 4; ++b)
                if (op & (1u << b)) off |= static_cast<uint64_t>(static_cast<unsigned char>(delta[i++])) << (8 * b);
            for (int b = 0; b < 3; ++b)
                if (op & (1u << (4 + b))) len |= static_cast<uint64_t>(static_cast<unsigned char>(delta[i++])) << (8 * b);
            if (len == 0) len = 0x10000;
            if (off + len > base.size()) throw CorruptRepo("delta copy out of range");
            out.append(base, off, len);
        } else if (op) {
            // literal insert of `op` bytes
            if (i + op > delta.size()) throw CorruptRepo("delta literal out of range");
            out.append(delta, i, op);
            i += op;
        } else {
            throw CorruptRepo("delta opcode 0");
        }
    }
    if (out.size() != tgt_size) throw CorruptRepo("delta target size mismatch");
    return out;
}

}  // namespace

std::string read_file_or_throw(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CorruptRepo("cannot read " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return data;
}

std::optional<std::string> read_file_if_exists(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return data;
}

ObjectDb::ObjectDb(std::string git_dir) : git_dir_(std::move(git_dir)) {}

std::optional<GitObject> ObjectDb::read(const std::string& oid) const {
    if (oid.size() != 40) throw CorruptRepo("oid is not 40 hex chars: " + oid);
    if (auto obj = read_loose(oid)) return obj;
    return read_packed(oid);
}

std::optional<GitObject> ObjectDb::read_loose(const std::string& oid) const {
    std::string path = git_dir_ + "/objects/" + oid.substr(0, 2) + "/" + oid.substr(2);
    auto raw = read_file_if_exists(path);
    if (!raw) return std::nullopt;

    std::string inflated =
        inflate_all(reinterpret_cast<const unsigned char*>(raw->data()), raw->size(), path);
    size_t nul = inflated.find('\0');
    size_t space = inflated.find(' ');
    if (nul == std::string::npos || space == std::string::npos || space > nul)
        throw CorruptRepo("malformed loose object header in " + path);

    GitObject obj;
    obj.type = type_from_name(inflated.substr(0, space), path);
    obj.data = inflated.substr(nul + 1);
    unsigned long declared = std::strtoul(inflated.c_str() + space + 1, nullptr, 10);
    if (declared != obj.data.size()) throw CorruptRepo("loose object size mismatch in " + path);
    return obj;
}

void ObjectDb::load_packs() const {
    if (packs_loaded_) return;
    packs_loaded_ = true;
    std::string pack_dir = git_dir_ + "/objects/pack";
    if (!fs::is_directory(pack_dir)) return;

    std::vector<std::string> idx_paths;
    for (const auto& entry : fs::directory_iterator(pack_dir)) {
        if (entry.path().extension() == ".idx") idx_paths.push_back(entry.path().string());
    }
    std::sort(idx_paths.begin(), idx_paths.end());

    for (const std::string& idx_path : idx_paths) {
        PackFile pf;
        pf.idx_data = read_file_or_throw(idx_path);
        if (pf.idx_data.size() < 8 + 256 * 4 ||
            std::memcmp(pf.idx_data.data(), "\377tOc", 4) != 0 || be32(pf.idx_data, 4) != 2)
            throw CorruptRepo("unsupported pack index format: " + idx_path);

        size_t fanout = 8;
        pf.count = be32(pf.idx_data, fanout + 255 * 4);
        pf.names_off = fanout + 256 * 4;
        size_t crc_off = pf.names_off + static_cast<size_t>(pf.count) * 20;
        pf.offsets_off = crc_off + static_cast<size_t>(pf.count) * 4;
        pf.large_off = pf.offsets_off + static_cast<size_t>(pf.count) * 4;
        if (pf.idx_data.size() < pf.large_off) throw CorruptRepo("truncated pack index: " + idx_path);

        std::string pack_path = idx_path.substr(0, idx_path.size() - 4) + ".pack";
        pf.pack_data = read_file_or_throw(pack_path);
        if (pf.pack_data.size() < 12 || std::memcmp(pf.pack_data.data(), "PACK", 4) != 0)
            throw CorruptRepo("malformed pack file: " + pack_path);

        packs_.push_back(std::move(pf));
    }
}

std::optional<GitObject> ObjectDb::read_packed(const std::string& oid) const {
    load_packs();
    std::string bin = from_hex(oid);

    for (size_t pi = 0; pi < packs_.size(); ++pi) {
        const PackFile& pf = packs_[pi];
        unsigned char first = static_cast<unsigned char>(bin[0]);
        uint32_t lo = first == 0 ? 0 : be32(pf.idx_data, 8 + (first - 1) * 4);
        uint32_t hi = be32(pf.idx_data, 8 + first * 4);

        while (lo < hi) {
            uint32_t mid = lo + (hi - lo) / 2;
            int cmp = std::memcmp(bin.data(), pf.idx_data.data() + pf.names_off + mid * 20, 20);
            if (cmp == 0) {
                uint32_t raw = be32(pf.idx_data, pf.offsets_off + mid * 4);
                uint64_t offset = raw;
                if (raw & 0x80000000u)
                    offset = be64(pf.idx_data, pf.large_off + (raw & 0x7fffffffu) * 8);
                return read_pack_entry(pf, offset, 0);
            }
            if (cmp < 0) hi = mid;
            else lo = mid + 1;
        }
    }
    return std::nullopt;
}

GitObject ObjectDb::read_pack_entry(const PackFile& pack, uint64_t offset, int depth) const {
    if (depth > 64) throw CorruptRepo("delta chain too deep");
    size_t pack_index = static_cast<size_t>(&pack - packs_.data());
    auto cache_key = std::make_pair(pack_index, offset);
    if (auto it = pack_cache_.find(cache_key); it != pack_cache_.end()) return it->second;

    const std::string& d = pack.pack_data;
    if (offset >= d.size()) throw CorruptRepo("pack offset out of range");
    size_t i = offset;

    unsigned char c = static_cast<unsigned char>(d[i++]);
    int type = (c >> 4) & 7;
    uint64_t size = c & 15;
    int shift = 4;
    while (c & 0x80) {
        if (i >= d.size()) throw CorruptRepo("truncated pack entry header");
        c = static_cast<unsigned char>(d[i++]);
        size |= static_cast<uint64_t>(c & 0x7f) << shift;
        shift += 7;
    }

    GitObject result;
    if (type == kOfsDelta || type == kRefDelta) {
        GitObject base;
        if (type == kOfsDelta) {
            c = static_cast<unsigned char>(d[i++]);
            uint64_t back = c & 0x7f;
            while (c & 0x80) {
                if (i >= d.size()) throw CorruptRepo("truncated ofs-delta offset");
                c = static_cast<unsigned char>(d[i++]);
                back = ((back + 1) << 7) | (c & 0x7f);
            }
            if (back == 0 || back > offset) throw CorruptRepo("ofs-delta offset out of range");
            base = read_pack_entry(pack, offset - back, depth + 1);
        } else {
            if (i + 20 > d.size()) throw CorruptRepo("truncated ref-delta base");
            std::string base_oid = to_hex(reinterpret_cast<const unsigned char*>(d.data() + i), 20);
            i += 20;
            auto base_obj = read(base_oid);  // may live in another pack or loose
            if (!base_obj) throw CorruptRepo("ref-delta base missing: " + base_oid);
            base = std::move(*base_obj);
        }
        std::string delta = inflate_all(reinterpret_cast<const unsigned char*>(d.data() + i),
                                        d.size() - i, "pack delta");
        if (delta.size() != size) throw CorruptRepo("pack delta size mismatch");
        result.type = base.type;
        result.data = apply_delta(base.data, delta);
    } else if (type >= 1 && type <= 4) {
        static const ObjType kTypes[4] = {ObjType::Commit, ObjType::Tree, ObjType::Blob,
                                          ObjType::Tag};
        result.type = kTypes[type - 1];
        result.data = inflate_all(reinterpret_cast<const unsigned char*>(d.data() + i),
                                  d.size() - i, "pack object");
        if (result.data.size() != size) throw CorruptRepo("pack object size mismatch");
    } else {
        throw CorruptRepo("unknown pack entry type " + std::to_string(type));
    }

    if (pack_cache_.size() > 8192) pack_cache_.clear();
    pack_cache_.emplace(cache_key, result);
    return result;
}

std::optional<std::string> ObjectDb::resolve_ref(const std::string& name) const {
    std::string content;
    if (auto loose = read_file_if_exists(git_dir_ + "/" + name)) {
        content = *loose;
    } else if (name != "HEAD") {
        // packed-refs fallback
        if (auto packed = read_file_if_exists(git_dir_ + "/packed-refs")) {
            size_t start = 0;
            while (start < packed->size()) {
                size_t eol = packed->find('\n', start);
                if (eol == std::string::npos) eol = packed->size();
                std::string line = packed->substr(start, eol - start);
                start = eol + 1;
                if (line.empty() || line[0] == '#' || line[0] == '^') continue;
                size_t sp = line.find(' ');
                if (sp == 40 && line.compare(41, std::string::npos, name) == 0)
                    return line.substr(0, 40);
            }
        }
        return std::nullopt;
    } else {
        return std::nullopt;  // missing HEAD: caller decides severity
    }

    while (!content.empty() && (content.back() == '\n' || content.back() == '\r'))
        content.pop_back();
    if (content.rfind("ref: ", 0) == 0) return resolve_ref(content.substr(5));
    if (content.size() == 40) return content;
    return std::nullopt;
}

std::vector<TreeEntry> ObjectDb::parse_tree(const std::string& data) {
    std::vector<TreeEntry> entries;
    size_t i = 0;
    while (i < data.size()) {
        size_t sp = data.find(' ', i);
        size_t nul = data.find('\0', i);
        if (sp == std::string::npos || nul == std::string::npos || sp > nul)
            throw CorruptRepo("malformed tree entry");
        if (nul + 21 > data.size()) throw CorruptRepo("truncated tree entry");

        TreeEntry e;
        e.mode = static_cast<uint32_t>(std::strtoul(data.substr(i, sp - i).c_str(), nullptr, 8));
        e.name = data.substr(sp + 1, nul - sp - 1);
        e.oid = to_hex(reinterpret_cast<const unsigned char*>(data.data() + nul + 1), 20);
        entries.push_back(std::move(e));
        i = nul + 21;
    }
    return entries;
}

}  // namespace churnscope
