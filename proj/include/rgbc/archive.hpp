#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rgbc/barcode.hpp"
#include "rgbc/bitvec.hpp"

namespace rgbc {

struct ArchiveEntry {
    std::string id;        // unique within an archive
    std::string irma_code; // empty = absent
    BitVec bits;           // length == archive n_bits
};

/// An ordered collection of equal-length barcodes produced by one
/// method/configuration, with binary persistence.
///
/// File format (little-endian): magic "RGBC", format version u16,
/// method tag u8, config block of nine u16 fields (N_u, N_v, s, t,
/// image side, n_angles, d1, d2, bins_per_angle), n_bits u32, entry
/// count u64, then per entry: id length u16 + UTF-8 bytes, code length
/// u8 + bytes (0 = absent), ceil(n_bits/8) packed bytes (bit 0 = LSB of
/// byte 0). The file ends with a CRC32 of every preceding byte.
struct BarcodeArchive {
    Method method = Method::RBC;
    EncoderConfig config;
    std::size_t n_bits = 0;
    std::vector<ArchiveEntry> entries;

    /// Validates length and id uniqueness.
    void add(ArchiveEntry entry);
};

constexpr std::uint16_t kArchiveFormatVersion = 1;

void save_archive(const BarcodeArchive& archive, const std::string& path);
BarcodeArchive load_archive(const std::string& path);

struct RetrievalResult {
    std::string query_id;
    struct Hit {
        std::string id;
        double similarity = 0.0;
        std::string irma_code;
    };
    std::vector<Hit> hits; // similarity non-increasing, ties by ascending id
};

/// 1 - (differing bits) / n_bits. Lengths must match.
double hamming_similarity(const BitVec& a, const BitVec& b);

/// Exhaustive top-k scan. Ties broken by ascending id; entries whose id
/// equals exclude_id are skipped (the j != i rule for self-retrieval).
/// The query's method and layout must match the archive's.
RetrievalResult search(const Barcode& query, const BarcodeArchive& archive, std::size_t k,
                       const std::string& query_id = "",
                       const std::optional<std::string>& exclude_id = std::nullopt);

/// Same scan for a raw bit vector already known to match the layout.
std::vector<RetrievalResult::Hit> search_bits(const BitVec& query, const BarcodeArchive& archive,
                                              std::size_t k,
                                              const std::optional<std::string>& exclude_id =
                                                  std::nullopt);

} // namespace rgbc
