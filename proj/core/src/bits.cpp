#include "asqkd/bits.hpp"

#include <stdexcept>

#include "asqkd/rng.hpp"

namespace asqkd {

BitString::BitString(std::size_t length, bool value) : bits_(length, value ? 1 : 0) {}

BitString BitString::from_string(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
        out.bits_.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

BitString BitString::random(std::size_t length, Rng& rng) {
    BitString out(length);
    for (std::size_t i = 0; i < length; ++i) out.bits_[i] = rng.bit() ? 1 : 0;
    return out;
}

bool BitString::at(std::size_t i) const {
    if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
    return bits_[i] != 0;
}

void BitString::set(std::size_t i, bool value) {
    if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
    bits_[i] = value ? 1 : 0;
}

void BitString::flip(std::size_t i) {
    if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
    bits_[i] ^= 1;
}

BitString BitString::slice(std::size_t pos, std::size_t length) const {
    if (pos > bits_.size() || length > bits_.size() - pos) {
        throw std::out_of_range("slice exceeds bit string");
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                     bits_.begin() + static_cast<std::ptrdiff_t>(pos + length));
    return out;
}

BitString BitString::concat(const BitString& tail) const {
    BitString out = *this;
    out.bits_.insert(out.bits_.end(), tail.bits_.begin(), tail.bits_.end());
    return out;
}

bool BitString::all_zero() const noexcept {
    for (auto b : bits_) {
        if (b != 0) return false;
    }
    return true;
}

BitString BitString::operator^(const BitString& other) const {
    if (other.size() != size()) throw std::invalid_argument("xor of unequal lengths");
    BitString out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] ^= other.bits_[i];
    return out;
}

std::uint64_t BitString::to_uint(std::size_t pos, std::size_t width) const {
    if (width > 64) throw std::invalid_argument("to_uint width exceeds 64");
    if (pos > bits_.size() || width > bits_.size() - pos) {
        throw std::out_of_range("to_uint exceeds bit string");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1) | bits_[pos + i];
    return v;
}

std::string BitString::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

}  // namespace asqkd
