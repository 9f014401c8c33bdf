#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "asqkd/hashing.hpp"
#include "asqkd/rng.hpp"
#include "oracles.hpp"

using namespace asqkd;

namespace {

BitString bits(const char* s) { return BitString::from_string(s); }

}  // namespace

TEST_CASE("select_hash interprets k2 MSB first") {
    CHECK(select_hash(bits("0101")).element == 0b0101);
    CHECK(select_hash(bits("0000")).element == 1);
    CHECK(select_hash(bits("11")).element == 0b11);
    CHECK(select_hash(bits("0101")).m == 4);
    CHECK_THROWS_AS(select_hash(BitString{}), std::invalid_argument);
    CHECK_THROWS_AS(select_hash(BitString(33)), std::invalid_argument);
}

TEST_CASE("find_reduction_poly known values") {
    CHECK(find_reduction_poly(1).to_string() == "10");
    CHECK(find_reduction_poly(2).to_string() == "111");
    CHECK(find_reduction_poly(3).to_string() == "1011");
    CHECK(find_reduction_poly(4).to_string() == "10011");
    CHECK(find_reduction_poly(8).to_string() == "100011011");
    CHECK_THROWS_AS(find_reduction_poly(0), std::invalid_argument);
    CHECK_THROWS_AS(find_reduction_poly(33), std::invalid_argument);
}

TEST_CASE("find_reduction_poly matches trial-division oracle") {
    for (int m = 2; m <= 16; ++m) {
        CAPTURE(m);
        CHECK(find_reduction_poly(m).to_string() == oracle::smallest_irreducible(m));
    }
}

TEST_CASE("property: reduction polynomials are irreducible") {
    for (std::size_t m = 2; m <= 24; ++m) {
        const std::uint64_t p = reduction_poly_value(m);
        CHECK(gf2::degree(p) == static_cast<int>(m));
        for (std::uint64_t d = 2; gf2::degree(d) <= static_cast<int>(m / 2); ++d) {
            REQUIRE(gf2::mod(p, d) != 0);
        }
    }
}

TEST_CASE("universal_hash of zero message is zero") {
    for (const char* key : {"0000", "0011", "1111"}) {
        CHECK(universal_hash(bits("00000000"), select_hash(bits(key))).to_string() == "0000");
    }
    CHECK(universal_hash(BitString(13), select_hash(bits("10110011"))).all_zero());
    CHECK_THROWS_AS(universal_hash(BitString{}, select_hash(bits("0011"))), std::invalid_argument);
}

TEST_CASE("universal_hash agrees with the GF(2^4) table oracle") {
    const std::string digest = oracle::horner_hash("10100101", "0011", 0b10011);
    CHECK(digest == "1011");
    CHECK(universal_hash(bits("10100101"), select_hash(bits("0011"))).to_string() == digest);
}

TEST_CASE("universal_hash agrees with the table oracle on random inputs") {
    Rng rng(99);
    for (int m : {2, 3, 5, 8}) {
        const auto modulus = static_cast<std::uint32_t>(std::stoul(oracle::smallest_irreducible(m), nullptr, 2));
        for (int trial = 0; trial < 50; ++trial) {
            const BitString msg = BitString::random(1 + rng.next_u64() % 30, rng);
            const BitString key = BitString::random(m, rng);
            CHECK(universal_hash(msg, select_hash(key)).to_string() ==
                  oracle::horner_hash(msg.to_string(), key.to_string(), modulus));
        }
    }
}

TEST_CASE("property: hash is linear in the message") {
    Rng rng(123);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + rng.next_u64() % 15;
        const std::size_t n = 1 + rng.next_u64() % 40;
        const HashKey key = select_hash(BitString::random(m, rng));
        const BitString a = BitString::random(n, rng);
        const BitString b = BitString::random(n, rng);
        CHECK(universal_hash(a ^ b, key) == (universal_hash(a, key) ^ universal_hash(b, key)));
    }
}

TEST_CASE("property: deterministic digests") {
    const HashKey key = select_hash(bits("1100101011110000"));
    const BitString msg = bits("1011001110001111000010101");
    CHECK(universal_hash(msg, key) == universal_hash(msg, key));
    CHECK(universal_hash(msg, key).size() == 16);
}

TEST_CASE("collision rate stays within the almost-universal bound") {
    Rng rng(2718);
    const std::size_t n = 16, m = 8;
    const int samples = 100000;
    int collisions = 0;
    for (int i = 0; i < samples; ++i) {
        const BitString a = BitString::random(n, rng);
        BitString b = BitString::random(n, rng);
        if (a == b) b.flip(0);
        const HashKey key = select_hash(BitString::random(m, rng));
        collisions += universal_hash(a, key) == universal_hash(b, key);
    }
    const double bound = 2.0 / 256.0;
    const double sigma = std::sqrt(bound * (1 - bound) / samples);
    CHECK(collisions / double(samples) <= bound + 3 * sigma);
}

TEST_CASE("exhaustive small-scale universality (m=4, n=8)") {
    Rng rng(555);
    std::set<std::string> seen;
    std::vector<BitString> sample;
    while (sample.size() < 200) {
        BitString s = BitString::random(8, rng);
        if (seen.insert(s.to_string()).second) sample.push_back(s);
        if (seen.size() == 256) break;
    }
    std::size_t pairs = 0, collisions = 0;
    for (unsigned k = 1; k < 16; ++k) {
        BitString key(4);
        for (int i = 0; i < 4; ++i) key.set(i, (k >> (3 - i)) & 1u);
        const HashKey hk = select_hash(key);
        std::vector<BitString> digests;
        for (const auto& msg : sample) digests.push_back(universal_hash(msg, hk));
        for (std::size_t i = 0; i < sample.size(); ++i) {
            for (std::size_t j = i + 1; j < sample.size(); ++j) {
                ++pairs;
                collisions += digests[i] == digests[j];
            }
        }
    }
    CHECK(collisions / double(pairs) <= 1.5 * 2.0 / 16.0);
}
