#include "arena/bits.hpp"

#include <stdexcept>

#include "arena/rng.hpp"

namespace arena {

void BitString::mask_tail() {
  const std::size_t rem = nbits_ % 64;
  if (rem != 0 && !words_.empty()) {
    words_.back() &= (~0ull >> (64 - rem));
  }
}

BitString BitString::random(std::size_t nbits, RngStream& rng) {
  BitString b(nbits);
  for (auto& w : b.words_) w = rng.next_u64();
  b.mask_tail();
  return b;
}

void BitString::set_bit(std::size_t i, int v) {
  if (i >= nbits_) throw std::out_of_range("BitString::set_bit");
  const std::uint64_t mask = 1ull << (i % 64);
  if (v)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

void BitString::set_range(std::size_t at, std::uint64_t value, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    set_bit(at + i, static_cast<int>((value >> i) & 1ull));
  }
}

std::uint64_t BitString::get_range(std::size_t at, std::size_t count) const {
  if (count > 64 || at + count > nbits_) throw std::out_of_range("BitString::get_range");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    v |= static_cast<std::uint64_t>(bit(at + i)) << i;
  }
  return v;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  const std::size_t nibbles = (nbits_ + 3) / 4;
  out.reserve(nibbles);
  for (std::size_t i = 0; i < nibbles; ++i) {
    const std::size_t at = i * 4;
    const std::size_t count = std::min<std::size_t>(4, nbits_ - at);
    out.push_back(digits[get_range(at, count)]);
  }
  return out;
}

BitString BitString::from_hex(const std::string& hex, std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4) throw std::invalid_argument("hex length mismatch");
  BitString b(nbits);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    std::uint64_t v;
    if (c >= '0' && c <= '9')
      v = static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v = static_cast<std::uint64_t>(c - 'a' + 10);
    else
      throw std::invalid_argument("bad hex digit");
    const std::size_t at = i * 4;
    const std::size_t count = std::min<std::size_t>(4, nbits - at);
    if (count < 4 && (v >> count) != 0) throw std::invalid_argument("hex overflows bit length");
    b.set_range(at, v, count);
  }
  return b;
}

}  // namespace arena
