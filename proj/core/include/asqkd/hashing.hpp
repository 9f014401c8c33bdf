#pragma once

#include <cstddef>
#include <cstdint>

#include "asqkd/bits.hpp"

namespace asqkd {

inline constexpr std::size_t kMinHashBits = 1;
inline constexpr std::size_t kMaxHashBits = 32;

// Polynomials over GF(2) packed into integers, bit i = coefficient of x^i.
namespace gf2 {
int degree(std::uint64_t p) noexcept;
std::uint64_t mod(std::uint64_t a, std::uint64_t modulus) noexcept;
/// Product of two field elements reduced modulo `modulus` (degree m <= 32).
std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) noexcept;
bool is_irreducible(std::uint64_t p) noexcept;
}  // namespace gf2

/// Lexicographically smallest irreducible polynomial of degree m, returned as its m+1
/// coefficients MSB first. Throws std::invalid_argument for m outside [1, 32].
BitString find_reduction_poly(std::size_t m);
std::uint64_t reduction_poly_value(std::size_t m);

/// Member of the polynomial-evaluation family over GF(2^m), chosen by K2.
struct HashKey {
    std::size_t m = 0;
    std::uint64_t element = 1;    // nonzero field element, polynomial basis
    std::uint64_t modulus = 0;    // reduction polynomial including x^m
};

/// Interprets k2 MSB first as a field element; the all-zero key maps to 1.
HashKey select_hash(const BitString& k2);

/// Horner evaluation ((b1*k + b2)*k + ... + bL)*k over zero-padded m-bit blocks.
/// Throws std::invalid_argument for an empty message.
BitString universal_hash(const BitString& message, const HashKey& key);

}  // namespace asqkd
