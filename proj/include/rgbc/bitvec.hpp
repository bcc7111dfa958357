#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rgbc/errors.hpp"

namespace rgbc {

/// Packed bit sequence. Bit i lives at word i/64, bit position i%64,
/// which serializes to "bit 0 = LSB of byte 0". Trailing pad bits of
/// the last word are kept at zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n_bits)
        : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    std::size_t size() const { return n_bits_; }
    bool empty() const { return n_bits_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void append(bool value) {
        if (n_bits_ % 64 == 0) words_.push_back(0);
        ++n_bits_;
        if (value) set(n_bits_ - 1, true);
    }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    /// ceil(n_bits/8) bytes, LSB-first within each byte.
    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((n_bits_ + 7) / 8, 0);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = static_cast<std::uint8_t>(words_[k >> 3] >> (8 * (k & 7)));
        return out;
    }

    static BitVec from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t n_bits) {
        if (bytes.size() != (n_bits + 7) / 8)
            throw FormatError("bit payload size does not match bit count");
        BitVec v(n_bits);
        for (std::size_t k = 0; k < bytes.size(); ++k)
            v.words_[k >> 3] |= std::uint64_t{bytes[k]} << (8 * (k & 7));
        // mask pad bits so equality and popcount stay well defined
        if (n_bits % 64 != 0 && !v.words_.empty())
            v.words_.back() &= (std::uint64_t{1} << (n_bits % 64)) - 1;
        return v;
    }

    bool operator==(const BitVec&) const = default;

private:
    std::size_t n_bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing bits. Lengths must match.
inline std::size_t hamming_distance(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size())
        throw ConfigError("hamming_distance: bit lengths differ");
    std::size_t n = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        n += std::popcount(wa[i] ^ wb[i]);
    return n;
}

} // namespace rgbc
