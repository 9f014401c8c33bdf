#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace asqkd {

class Rng;

/// Fixed-length string of classical bits, index 0 first (leftmost when printed).
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length, bool value = false);

    /// Parses a string of '0' / '1' characters; throws std::invalid_argument otherwise.
    static BitString from_string(std::string_view text);
    static BitString random(std::size_t length, Rng& rng);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    bool at(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);
    void push_back(bool value) { bits_.push_back(value ? 1 : 0); }

    BitString slice(std::size_t pos, std::size_t length) const;
    BitString concat(const BitString& tail) const;
    bool all_zero() const noexcept;

    /// Bitwise XOR; lengths must match.
    BitString operator^(const BitString& other) const;

    /// Packs bits [pos, pos+width) MSB first into an integer; width <= 64.
    std::uint64_t to_uint(std::size_t pos, std::size_t width) const;

    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace asqkd
