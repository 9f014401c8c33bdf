#include "asqkd/hashing.hpp"

#include <array>
#include <bit>
#include <mutex>
#include <stdexcept>
#include <string>

namespace asqkd {
namespace gf2 {

int degree(std::uint64_t p) noexcept { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t mod(std::uint64_t a, std::uint64_t modulus) noexcept {
    const int dm = degree(modulus);
    for (int da = degree(a); da >= dm; da = degree(a)) a ^= modulus << (da - dm);
    return a;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) noexcept {
    std::uint64_t product = 0;
    while (b != 0) {
        if (b & 1U) product ^= a;
        a <<= 1;
        b >>= 1;
    }
    return mod(product, modulus);
}

bool is_irreducible(std::uint64_t p) noexcept {
    const int d = degree(p);
    if (d < 1) return false;
    // Every reducible p has a factor of degree <= d/2.
    const std::uint64_t limit = std::uint64_t{1} << (d / 2 + 1);
    for (std::uint64_t q = 2; q < limit; ++q) {
        if (mod(p, q) == 0) return false;
    }
    return true;
}

}  // namespace gf2

std::uint64_t reduction_poly_value(std::size_t m) {
    if (m < kMinHashBits || m > kMaxHashBits) {
        throw std::invalid_argument("hash width m=" + std::to_string(m) + " outside [1, 32]");
    }
    static std::mutex mutex;
    static std::array<std::uint64_t, kMaxHashBits + 1> cache{};
    std::lock_guard lock(mutex);
    if (cache[m] == 0) {
        // Numeric order on the MSB-first coefficient string is lexicographic order.
        std::uint64_t p = std::uint64_t{1} << m;
        while (!gf2::is_irreducible(p)) ++p;
        cache[m] = p;
    }
    return cache[m];
}

BitString find_reduction_poly(std::size_t m) {
    const std::uint64_t p = reduction_poly_value(m);
    BitString out(m + 1);
    for (std::size_t i = 0; i <= m; ++i) out.set(i, ((p >> (m - i)) & 1U) != 0);
    return out;
}

HashKey select_hash(const BitString& k2) {
    const std::size_t m = k2.size();
    if (m < kMinHashBits || m > kMaxHashBits) {
        throw std::invalid_argument("K2 length " + std::to_string(m) + " outside [1, 32]");
    }
    HashKey key;
    key.m = m;
    key.modulus = reduction_poly_value(m);
    key.element = k2.to_uint(0, m);
    if (key.element == 0) key.element = 1;
    return key;
}

BitString universal_hash(const BitString& message, const HashKey& key) {
    if (message.empty()) throw std::invalid_argument("cannot hash an empty message");
    if (key.m < kMinHashBits || key.m > kMaxHashBits || gf2::degree(key.modulus) != static_cast<int>(key.m) ||
        key.element == 0 || gf2::degree(key.element) >= static_cast<int>(key.m)) {
        throw std::invalid_argument("malformed hash key");
    }
    const std::size_t m = key.m;
    const std::size_t blocks = (message.size() + m - 1) / m;
    std::uint64_t h = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::uint64_t block = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t pos = b * m + j;
            block = (block << 1) | ((pos < message.size() && message[pos]) ? 1U : 0U);
        }
        h = gf2::mul(h ^ block, key.element, key.modulus);
    }
    BitString digest(m);
    for (std::size_t i = 0; i < m; ++i) digest.set(i, ((h >> (m - 1 - i)) & 1U) != 0);
    return digest;
}

}  // namespace asqkd
