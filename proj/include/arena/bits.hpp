#ifndef ARENA_BITS_HPP
#define ARENA_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace arena {

class RngStream;

// Fixed-length bit string (key material, master public keys).  Bits are
// packed little-endian into 64-bit words: bit i lives in word i/64 at
// position i%64.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitString random(std::size_t nbits, RngStream& rng);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  int bit(std::size_t i) const {
    return static_cast<int>((words_[i / 64] >> (i % 64)) & 1ull);
  }
  void set_bit(std::size_t i, int v);

  // Writes `count` bits of `value` starting at bit offset `at`.
  void set_range(std::size_t at, std::uint64_t value, std::size_t count);
  // Reads `count` (<=64) bits starting at offset `at`.
  std::uint64_t get_range(std::size_t at, std::size_t count) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::string to_hex() const;
  static BitString from_hex(const std::string& hex, std::size_t nbits);

  bool operator==(const BitString& o) const {
    return nbits_ == o.nbits_ && words_ == o.words_;
  }
  bool operator!=(const BitString& o) const { return !(*this == o); }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
  void mask_tail();
};

}  // namespace arena

#endif  // ARENA_BITS_HPP
