#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "dnastore/error.hpp"

namespace dnastore {

// 2-bit codes ordered A < C < G < T, so a packed word compares like its string.
inline constexpr std::array<char, 4> kBases = {'A', 'C', 'G', 'T'};

/// Returns 0..3 for A/C/G/T, or -1 for anything else.
constexpr int base_code(char b) noexcept {
  switch (b) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

constexpr bool is_base(char b) noexcept { return base_code(b) >= 0; }

// Packed codewords keep the first base in the most significant position.
inline constexpr std::size_t kMaxCodewordLength = 31;

using PackedWord = std::uint64_t;

inline PackedWord pack_word(std::string_view w) {
  if (w.size() > kMaxCodewordLength) {
    throw DomainError("codeword length " + std::to_string(w.size()) + " exceeds maximum " +
                      std::to_string(kMaxCodewordLength));
  }
  PackedWord p = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int c = base_code(w[i]);
    if (c < 0) {
      throw DomainError(std::string("invalid nucleotide '") + w[i] + "' at position " +
                        std::to_string(i));
    }
    p = (p << 2) | static_cast<PackedWord>(c);
  }
  return p;
}

inline std::string unpack_word(PackedWord p, std::size_t length) {
  std::string w(length, 'A');
  for (std::size_t i = length; i-- > 0;) {
    w[i] = kBases[p & 3u];
    p >>= 2;
  }
  return w;
}

/// Number of differing bases between two packed words of equal length.
constexpr int packed_hamming(PackedWord a, PackedWord b) noexcept {
  PackedWord x = a ^ b;
  x = (x | (x >> 1)) & 0x5555555555555555ull;
  return std::popcount(x);
}

}  // namespace dnastore
