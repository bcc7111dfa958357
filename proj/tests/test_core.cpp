#include <doctest.h>

#include <atomic>
#include <numeric>
#include <vector>

#include "rgbc/bitvec.hpp"
#include "rgbc/errors.hpp"
#include "rgbc/matrix.hpp"
#include "rgbc/threading.hpp"

using namespace rgbc;

TEST_CASE("matrix basics") {
    Matrix m(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.size() == 6);
    for (double v : m.values()) CHECK(v == 0.0);
    m(1, 2) = 4.5;
    CHECK(m.values()[5] == 4.5); // row-major
    Matrix copy = m;
    CHECK(copy == m);
    copy(0, 0) = 1.0;
    CHECK_FALSE(copy == m);
    CHECK(Matrix().empty());
}

TEST_CASE("bitvec set/get and bit order") {
    BitVec b(12);
    CHECK(b.size() == 12);
    CHECK(b.popcount() == 0);
    b.set(0, true);
    b.set(3, true);
    b.set(11, true);
    CHECK(b.get(0));
    CHECK_FALSE(b.get(1));
    CHECK(b.popcount() == 3);
    // bit 0 is the LSB of byte 0
    auto bytes = b.to_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0b00001001);
    CHECK(bytes[1] == 0b00001000);
}

TEST_CASE("bitvec append grows across word boundaries") {
    BitVec b;
    for (int i = 0; i < 130; ++i) b.append(i % 3 == 0);
    CHECK(b.size() == 130);
    for (int i = 0; i < 130; ++i) CHECK(b.get(i) == (i % 3 == 0));
}

TEST_CASE("bitvec byte round-trip masks padding") {
    BitVec b(10);
    b.set(1, true);
    b.set(9, true);
    auto bytes = b.to_bytes();
    BitVec back = BitVec::from_bytes(bytes, 10);
    CHECK(back == b);
    // stray padding bits in the input are cleared
    bytes[1] |= 0xF0;
    CHECK(BitVec::from_bytes(bytes, 10) == b);
    CHECK_THROWS_AS(BitVec::from_bytes(bytes, 30), FormatError);
}

TEST_CASE("hamming distance") {
    BitVec a(9), b(9);
    a.set(0, true);
    a.set(8, true);
    b.set(8, true);
    CHECK(hamming_distance(a, a) == 0);
    CHECK(hamming_distance(a, b) == 1);
    CHECK_THROWS_AS(hamming_distance(a, BitVec(8)), ConfigError);
}

TEST_CASE("parallel_for touches each index exactly once") {
    std::vector<std::atomic<int>> touched(257);
    parallel_for(touched.size(), 4, [&](std::size_t i) { ++touched[i]; });
    for (const auto& t : touched) CHECK(t.load() == 1);
    parallel_for(0, 4, [&](std::size_t) { FAIL("no work expected"); });
}
