#include "rgbc/archive.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "rgbc/errors.hpp"

namespace rgbc {

namespace {

// CRC-32 (IEEE, reflected, poly 0xEDB88320), table-driven.
const std::array<std::uint32_t, 256>& crc_table() {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i) c = crc_table()[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Cursor {
public:
    Cursor(const std::uint8_t* data, std::size_t n) : data_(data), size_(n) {}

    std::size_t remaining() const { return size_ - pos_; }

    const std::uint8_t* take(std::size_t n) {
        if (remaining() < n) throw FormatError("archive: truncated file");
        const std::uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }

    std::uint8_t u8() { return *take(1); }

    std::uint16_t u16() {
        const std::uint8_t* p = take(2);
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    std::uint32_t u32() {
        const std::uint8_t* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        const std::uint8_t* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
        return v;
    }

private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace

void BarcodeArchive::add(ArchiveEntry entry) {
    if (entry.bits.size() != n_bits)
        throw ConfigError("archive: entry bit length does not match archive n_bits");
    for (const auto& e : entries)
        if (e.id == entry.id) throw ConfigError("archive: duplicate entry id: " + entry.id);
    entries.push_back(std::move(entry));
}

void save_archive(const BarcodeArchive& archive, const std::string& path) {
    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), {'R', 'G', 'B', 'C'});
    put_u16(buf, kArchiveFormatVersion);
    buf.push_back(static_cast<std::uint8_t>(archive.method));
    const EncoderConfig& c = archive.config;
    for (std::uint16_t v : {c.n_scales, c.n_orientations, c.win_rows, c.win_cols, c.image_side,
                            c.n_angles, c.d1, c.d2, c.bins_per_angle})
        put_u16(buf, v);
    put_u32(buf, static_cast<std::uint32_t>(archive.n_bits));
    put_u64(buf, archive.entries.size());

    for (const auto& e : archive.entries) {
        if (e.bits.size() != archive.n_bits)
            throw ConfigError("archive: entry bit length does not match archive n_bits");
        if (e.id.size() > 0xFFFF) throw ConfigError("archive: entry id longer than 65535 bytes");
        if (e.irma_code.size() > 0xFF) throw ConfigError("archive: code string longer than 255");
        put_u16(buf, static_cast<std::uint16_t>(e.id.size()));
        buf.insert(buf.end(), e.id.begin(), e.id.end());
        buf.push_back(static_cast<std::uint8_t>(e.irma_code.size()));
        buf.insert(buf.end(), e.irma_code.begin(), e.irma_code.end());
        const auto bytes = e.bits.to_bytes();
        buf.insert(buf.end(), bytes.begin(), bytes.end());
    }
    put_u32(buf, crc32(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw IoError("archive write failed: " + path);
}

BarcodeArchive load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);

    if (buf.size() < 4 || std::memcmp(buf.data(), "RGBC", 4) != 0)
        throw FormatError("archive: bad magic");
    if (buf.size() < 8) throw FormatError("archive: truncated file");
    const std::uint32_t stored_crc = [&] {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf[buf.size() - 4 + i]} << (8 * i);
        return v;
    }();
    if (crc32(buf.data(), buf.size() - 4) != stored_crc)
        throw FormatError("archive: checksum failure");

    Cursor cur(buf.data(), buf.size() - 4);
    cur.take(4); // magic
    const std::uint16_t version = cur.u16();
    if (version != kArchiveFormatVersion)
        throw FormatError("archive: unsupported format version " + std::to_string(version));

    BarcodeArchive archive;
    const std::uint8_t method_tag = cur.u8();
    if (method_tag < 1 || method_tag > 3) throw FormatError("archive: unknown method tag");
    archive.method = static_cast<Method>(method_tag);
    EncoderConfig& c = archive.config;
    for (std::uint16_t* field : {&c.n_scales, &c.n_orientations, &c.win_rows, &c.win_cols,
                                 &c.image_side, &c.n_angles, &c.d1, &c.d2, &c.bins_per_angle})
        *field = cur.u16();
    archive.n_bits = cur.u32();
    const std::uint64_t count = cur.u64();

    const std::size_t packed = (archive.n_bits + 7) / 8;
    std::unordered_set<std::string> seen;
    archive.entries.reserve(count < 4096 ? count : 4096);
    for (std::uint64_t i = 0; i < count; ++i) {
        ArchiveEntry e;
        const std::uint16_t id_len = cur.u16();
        const std::uint8_t* id = cur.take(id_len);
        e.id.assign(reinterpret_cast<const char*>(id), id_len);
        const std::uint8_t code_len = cur.u8();
        const std::uint8_t* code = cur.take(code_len);
        e.irma_code.assign(reinterpret_cast<const char*>(code), code_len);
        const std::uint8_t* bits = cur.take(packed);
        e.bits = BitVec::from_bytes(std::vector<std::uint8_t>(bits, bits + packed),
                                    archive.n_bits);
        if (!seen.insert(e.id).second)
            throw FormatError("archive: duplicate entry id: " + e.id);
        archive.entries.push_back(std::move(e));
    }
    if (cur.remaining() != 0) throw FormatError("archive: trailing bytes after last entry");
    return archive;
}

double hamming_similarity(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw ConfigError("hamming_similarity: bit lengths differ");
    if (a.size() == 0) throw ConfigError("hamming_similarity: empty codes");
    return 1.0 - static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

std::vector<RetrievalResult::Hit> search_bits(const BitVec& query, const BarcodeArchive& archive,
                                              std::size_t k,
                                              const std::optional<std::string>& exclude_id) {
    if (archive.entries.empty()) throw ConfigError("search: empty archive");
    if (query.size() != archive.n_bits)
        throw ConfigError("search: query bit length does not match archive");

    // (distance, index): integer distances make ties exact.
    std::vector<std::pair<std::size_t, std::size_t>> scored;
    scored.reserve(archive.entries.size());
    for (std::size_t i = 0; i < archive.entries.size(); ++i) {
        const auto& e = archive.entries[i];
        if (exclude_id && e.id == *exclude_id) continue;
        scored.emplace_back(hamming_distance(query, e.bits), i);
    }
    const auto better = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return archive.entries[a.second].id < archive.entries[b.second].id;
    };
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
    scored.resize(take);

    std::vector<RetrievalResult::Hit> hits;
    hits.reserve(take);
    for (const auto& [dist, idx] : scored) {
        const auto& e = archive.entries[idx];
        hits.push_back({e.id,
                        1.0 - static_cast<double>(dist) / static_cast<double>(archive.n_bits),
                        e.irma_code});
    }
    return hits;
}

RetrievalResult search(const Barcode& query, const BarcodeArchive& archive, std::size_t k,
                       const std::string& query_id,
                       const std::optional<std::string>& exclude_id) {
    if (query.method != archive.method)
        throw ConfigError("search: query method does not match archive");
    if (!same_layout(query.config, archive.config))
        throw ConfigError("search: query configuration does not match archive");
    RetrievalResult result;
    result.query_id = query_id;
    result.hits = search_bits(query.bits, archive, k, exclude_id);
    return result;
}

} // namespace rgbc
