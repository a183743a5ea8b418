#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dnastore/codebook.hpp"
#include "dnastore/error.hpp"
#include "dnastore/nucleotide.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

struct NucleotideSequence {
  std::string bases;
  std::size_t symbol_count = 0;
  std::size_t codeword_length = 0;

  friend bool operator==(const NucleotideSequence&, const NucleotideSequence&) = default;
};

inline int hamming(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) {
    throw DomainError("hamming distance needs equal lengths, got " + std::to_string(a.size()) +
                      " and " + std::to_string(b.size()));
  }
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

/// Concatenates the codeword of every symbol in row-major order.
inline NucleotideSequence encode(const SymbolTensor& s, const Codebook& cb) {
  if (!cb.is_bound()) throw EncodingError("codebook is not bound to a symbol range");
  const std::size_t n = cb.codeword_length();
  NucleotideSequence seq;
  seq.symbol_count = s.symbols.size();
  seq.codeword_length = n;
  seq.bases.reserve(s.symbols.size() * n);
  for (std::size_t i = 0; i < s.symbols.size(); ++i) {
    const std::int64_t k = s.symbols[i];
    if (!cb.binds(k)) {
      throw EncodingError("symbol " + std::to_string(k) + " at element " + std::to_string(i) +
                          " outside bound range [" + std::to_string(cb.symbol_offset()) + ", " +
                          std::to_string(cb.max_symbol()) + "]");
    }
    seq.bases += cb.words()[static_cast<std::size_t>(k - cb.symbol_offset())];
  }
  return seq;
}

namespace detail {

inline void check_framing(const NucleotideSequence& seq, const Codebook& cb) {
  if (!cb.is_bound()) throw EncodingError("codebook is not bound to a symbol range");
  const std::size_t n = cb.codeword_length();
  if (seq.bases.size() % n != 0) {
    throw FramingError("sequence length " + std::to_string(seq.bases.size()) +
                       " is not a multiple of codeword length " + std::to_string(n));
  }
  if (seq.codeword_length != 0 && seq.codeword_length != n) {
    throw FramingError("sequence was framed with codeword length " +
                       std::to_string(seq.codeword_length) + ", codebook uses " +
                       std::to_string(n));
  }
  if (seq.symbol_count != 0 && seq.symbol_count * n != seq.bases.size()) {
    throw FramingError("sequence declares " + std::to_string(seq.symbol_count) +
                       " symbols but carries " + std::to_string(seq.bases.size()) + " bases");
  }
}

inline Shape resolve_shape(std::optional<Shape> shape, std::size_t count) {
  if (!shape) return Shape{1, 1, count};
  if (shape->size() != count) {
    throw FramingError("sequence holds " + std::to_string(count) + " codewords, shape " +
                       to_string(*shape) + " needs " + std::to_string(shape->size()));
  }
  return *shape;
}

inline PackedWord pack_frame(std::string_view frame, std::size_t offset) {
  try {
    return pack_word(frame);
  } catch (const DomainError& e) {
    throw FormatError(std::string(e.what()) + " in codeword at offset " + std::to_string(offset));
  }
}

/// Lowest bound index at minimum Hamming distance from `word`.
inline std::size_t nearest_bound_index(PackedWord word, const Codebook& cb) {
  const auto packed = cb.packed();
  std::size_t best = 0;
  int best_d = packed_hamming(word, packed[0]);
  for (std::size_t i = 1; i < cb.bound_count() && best_d > 0; ++i) {
    const int d = packed_hamming(word, packed[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Inverse of encode; throws DecodeError on the first n-gram that is not a bound codeword.
/// Without `shape` the result is a flat 1x1xN tensor.
inline SymbolTensor decode_strict(const NucleotideSequence& seq, const Codebook& cb,
                                  std::optional<Shape> shape = std::nullopt) {
  detail::check_framing(seq, cb);
  const std::size_t n = cb.codeword_length();
  const std::size_t count = seq.bases.size() / n;
  std::vector<std::int64_t> symbols(count);
  const std::string_view bases = seq.bases;
  for (std::size_t j = 0; j < count; ++j) {
    const std::string_view frame = bases.substr(j * n, n);
    const auto idx = cb.bound_index_of(detail::pack_frame(frame, j * n));
    if (!idx) {
      throw DecodeError("'" + std::string(frame) + "' at offset " + std::to_string(j * n) +
                            " is not a bound codeword",
                        j * n);
    }
    symbols[j] = cb.symbol_offset() + static_cast<std::int64_t>(*idx);
  }
  return SymbolTensor(detail::resolve_shape(shape, count), std::move(symbols));
}

/// Decodes each n-gram independently, replacing unknown words with the nearest bound
/// codeword in Hamming distance (ties go to the lowest index).
inline SymbolTensor decode_robust(const NucleotideSequence& seq, const Codebook& cb,
                                  std::optional<Shape> shape = std::nullopt) {
  detail::check_framing(seq, cb);
  const std::size_t n = cb.codeword_length();
  const std::size_t count = seq.bases.size() / n;
  std::vector<std::int64_t> symbols(count);
  const std::string_view bases = seq.bases;
  for (std::size_t j = 0; j < count; ++j) {
    const PackedWord word = detail::pack_frame(bases.substr(j * n, n), j * n);
    const auto idx = cb.bound_index_of(word);
    const std::size_t i = idx ? *idx : detail::nearest_bound_index(word, cb);
    symbols[j] = cb.symbol_offset() + static_cast<std::int64_t>(i);
  }
  return SymbolTensor(detail::resolve_shape(shape, count), std::move(symbols));
}

}  // namespace dnastore
