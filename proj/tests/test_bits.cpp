#include <stdexcept>
#include <vector>

#include "arena/bits.hpp"
#include "arena/rng.hpp"
#include "doctest.h"

using namespace arena;

TEST_CASE("set_bit and bit round-trip against a reference model") {
  const std::size_t nbits = 131;  // crosses word boundaries, odd tail
  BitString b(nbits);
  std::vector<int> model(nbits, 0);
  RngStream rng(11);
  for (int step = 0; step < 1000; ++step) {
    const std::size_t i = rng.below(nbits);
    const int v = rng.bit();
    b.set_bit(i, v);
    model[i] = v;
  }
  for (std::size_t i = 0; i < nbits; ++i) CHECK(b.bit(i) == model[i]);
}

TEST_CASE("set_range and get_range agree with bitwise emulation") {
  const std::size_t nbits = 200;
  BitString b(nbits);
  std::vector<int> model(nbits, 0);
  RngStream rng(12);
  for (int step = 0; step < 300; ++step) {
    const std::size_t count = 1 + rng.below(64);
    const std::size_t at = rng.below(nbits - count + 1);
    const std::uint64_t value = rng.next_u64();
    b.set_range(at, value, count);
    for (std::size_t i = 0; i < count; ++i)
      model[at + i] = static_cast<int>((value >> i) & 1ull);
    std::uint64_t read = b.get_range(at, count);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < count; ++i)
      expect |= static_cast<std::uint64_t>(model[at + i]) << i;
    CHECK(read == expect);
  }
  for (std::size_t i = 0; i < nbits; ++i) CHECK(b.bit(i) == model[i]);
}

TEST_CASE("get_range rejects out-of-bounds reads") {
  BitString b(70);
  CHECK_THROWS_AS(static_cast<void>(b.get_range(10, 65)), std::out_of_range);
  CHECK_THROWS_AS(static_cast<void>(b.get_range(60, 20)), std::out_of_range);
  CHECK_THROWS_AS(b.set_bit(70, 1), std::out_of_range);
}

TEST_CASE("full-width 64-bit ranges survive a round-trip") {
  BitString b(128);
  b.set_range(0, 0x0123456789abcdefull, 64);
  b.set_range(64, ~0ull, 64);
  CHECK(b.get_range(0, 64) == 0x0123456789abcdefull);
  CHECK(b.get_range(64, 64) == ~0ull);
}

TEST_CASE("hex serialization round-trips and validates") {
  RngStream rng(13);
  for (std::size_t nbits : {1u, 4u, 5u, 63u, 64u, 65u, 130u}) {
    const BitString b = BitString::random(nbits, rng);
    const BitString back = BitString::from_hex(b.to_hex(), nbits);
    CHECK(back == b);
  }
  CHECK_THROWS_AS(BitString::from_hex("abc", 16), std::invalid_argument);
  CHECK_THROWS_AS(BitString::from_hex("zz", 8), std::invalid_argument);
  // A 5-bit string uses two nibbles; the second may only hold one bit.
  CHECK_THROWS_AS(BitString::from_hex("ff", 5), std::invalid_argument);
}

TEST_CASE("random bit strings have balanced mass and bounded tails") {
  RngStream rng(14);
  const std::size_t nbits = 4096;
  const BitString b = BitString::random(nbits, rng);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < nbits; ++i) ones += static_cast<std::size_t>(b.bit(i));
  // 5 sigma around nbits/2.
  CHECK(ones > nbits / 2 - 160);
  CHECK(ones < nbits / 2 + 160);
}

TEST_CASE("equality covers length and content") {
  BitString a(10), b(10), c(11);
  CHECK(a == b);
  CHECK(a != c);
  b.set_bit(3, 1);
  CHECK(a != b);
  b.set_bit(3, 0);
  CHECK(a == b);
  CHECK(BitString().empty());
  CHECK(!a.empty());
}
