#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "dnastore/codec.hpp"
#include "dnastore/random.hpp"

namespace dnastore {
namespace {

int oracle_hamming(const std::string& a, const std::string& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Lowest index among the bound words at minimum distance, by direct string comparison.
std::size_t oracle_nearest(const std::string& w, const Codebook& cb) {
  std::size_t best = 0;
  int best_d = 1 << 30;
  for (std::size_t i = 0; i < cb.bound_count(); ++i) {
    const int d = oracle_hamming(w, cb.words()[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

SymbolTensor random_symbols(Rng& rng, const Codebook& cb, std::size_t count) {
  std::vector<std::int64_t> k(count);
  for (auto& v : k) v = cb.symbol_offset() + static_cast<std::int64_t>(rng.below(cb.bound_count()));
  return SymbolTensor(Shape{1, 1, count}, std::move(k));
}

Codebook full_binding(const CodebookConfig& cfg) {
  const Codebook cb = generate(cfg);
  return bind_symbols(cb, 0, static_cast<std::int64_t>(cb.size()) - 1);
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming("ACG", "ACG"), 0);
  EXPECT_EQ(hamming("ACG", "ACT"), 1);
  EXPECT_EQ(hamming("AAAA", "TTTT"), 4);
  EXPECT_THROW(hamming("ACG", "AC"), DomainError);
}

TEST(Hamming, PackedAgreesWithStrings) {
  const auto words = generate(CodebookConfig{5, 3}).words();
  for (std::size_t i = 0; i < words.size(); i += 7) {
    for (std::size_t j = 0; j < words.size(); j += 11) {
      ASSERT_EQ(packed_hamming(pack_word(words[i]), pack_word(words[j])),
                oracle_hamming(words[i], words[j]));
    }
  }
}

TEST(Encode, SingleLookup) {
  const Codebook cb = bind_symbols(Codebook(CodebookConfig{3, 2}, {pack_word("ACT")}), 0, 0);
  EXPECT_EQ(encode(SymbolTensor(Shape{1, 1, 1}, {0}), cb).bases, "ACT");
}

TEST(Encode, ConcatenatesInElementOrder) {
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), -1, 1);
  const auto w = cb.words();
  const NucleotideSequence seq = encode(SymbolTensor(Shape{1, 1, 3}, {-1, 0, 1}), cb);
  EXPECT_EQ(seq.bases, w[0] + w[1] + w[2]);
  EXPECT_EQ(seq.symbol_count, 3u);
  EXPECT_EQ(seq.codeword_length, 3u);
}

TEST(Encode, LengthIsSymbolsTimesCodewordLength) {
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), -2, 2);
  EXPECT_EQ(encode(SymbolTensor(Shape{1, 1, 5}, {0, 1, 2, -1, -2}), cb).bases.size(), 15u);
}

TEST(Encode, Errors) {
  const Codebook unbound = generate(CodebookConfig{3, 2});
  EXPECT_THROW(encode(SymbolTensor(Shape{1, 1, 1}, {0}), unbound), EncodingError);
  const Codebook cb = bind_symbols(unbound, -1, 1);
  try {
    encode(SymbolTensor(Shape{1, 1, 3}, {0, 1, 2}), cb);
    FAIL();
  } catch (const EncodingError& e) {
    EXPECT_NE(std::string(e.what()).find("element 2"), std::string::npos) << e.what();
  }
}

TEST(DecodeStrict, RoundTripsAndPreservesShape) {
  Rng rng(1);
  const Codebook cb = bind_symbols(generate(CodebookConfig{4, 2}), -10, 10);
  const SymbolTensor s0 = random_symbols(rng, cb, 600);
  const SymbolTensor s(Shape{2, 15, 20}, s0.symbols);
  const auto seq = encode(s, cb);
  EXPECT_EQ(decode_strict(seq, cb, s.shape), s);
  EXPECT_EQ(decode_robust(seq, cb, s.shape), s);
}

TEST(DecodeStrict, EmptySequence) {
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), 0, 4);
  const SymbolTensor s = decode_strict(NucleotideSequence{}, cb);
  EXPECT_TRUE(s.symbols.empty());
}

TEST(DecodeStrict, ReportsOffsetOfUnknownWord) {
  Rng rng(2);
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), -2, 2);
  const auto s = random_symbols(rng, cb, 40);
  NucleotideSequence seq = encode(s, cb);
  // Find a single substitution that leaves the bound set, checked by brute force.
  for (std::size_t pos = 0; pos < seq.bases.size(); ++pos) {
    for (char b : {'A', 'C', 'G', 'T'}) {
      NucleotideSequence bad = seq;
      bad.bases[pos] = b;
      const std::size_t frame = pos / 3 * 3;
      const std::string word = bad.bases.substr(frame, 3);
      bool member = false;
      for (std::size_t i = 0; i < cb.bound_count(); ++i) member |= cb.words()[i] == word;
      if (member) continue;
      try {
        decode_strict(bad, cb);
        FAIL() << "accepted " << word;
      } catch (const DecodeError& e) {
        EXPECT_EQ(e.offset(), frame);
      }
      return;
    }
  }
  FAIL() << "no out-of-codebook mutation found";
}

TEST(DecodeRobust, NearestWordForHomopolymer) {
  const Codebook cb = full_binding(CodebookConfig{3, 2});
  std::vector<std::string> at_one;
  for (const auto& w : cb.words()) {
    if (oracle_hamming("AAA", w) == 1) at_one.push_back(w);
  }
  EXPECT_EQ(at_one, (std::vector<std::string>{"AAC", "AAG", "AAT", "ACA", "AGA", "ATA", "CAA",
                                              "GAA", "TAA"}));
  NucleotideSequence seq{"AAA", 1, 3};
  const SymbolTensor s = decode_robust(seq, cb);
  EXPECT_EQ(cb.words()[static_cast<std::size_t>(s.symbols[0])], "AAC");
}

TEST(DecodeRobust, ValidButWrongWordDecodesSilently) {
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), -2, 2);
  const auto seq = encode(SymbolTensor(Shape{1, 1, 3}, {0, 0, 0}), cb);
  NucleotideSequence corrupted = seq;
  corrupted.bases.replace(3, 3, cb.words()[4]);
  const SymbolTensor s = decode_robust(corrupted, cb);
  EXPECT_EQ(s.symbols, (std::vector<std::int64_t>{0, 2, 0}));
}

TEST(DecodeRobust, UnboundCodebookWordIsRepaired) {
  // Word 5 is a valid codeword but lies outside the five bound symbols.
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), -2, 2);
  NucleotideSequence seq{cb.words()[5], 1, 3};
  EXPECT_THROW(decode_strict(seq, cb), DecodeError);
  const auto s = decode_robust(seq, cb);
  EXPECT_EQ(s.symbols[0], -2 + static_cast<std::int64_t>(oracle_nearest(cb.words()[5], cb)));
}

TEST(DecodeRobust, FramingErrors) {
  const Codebook cb = bind_symbols(generate(CodebookConfig{3, 2}), 0, 4);
  EXPECT_THROW(decode_robust(NucleotideSequence{"ACGT", 0, 0}, cb), FramingError);
  EXPECT_THROW(decode_robust(NucleotideSequence{"ACGACG", 2, 2}, cb), FramingError);
  EXPECT_THROW(decode_robust(NucleotideSequence{"ACG", 1, 3}, cb, Shape{1, 1, 2}), FramingError);
  EXPECT_THROW(decode_robust(NucleotideSequence{"ANG", 1, 3}, cb), FormatError);
}

TEST(DecodeRobust, ExhaustiveNearestOracleSmallCodebooks) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t r : {1u, 2u}) {
      const Codebook full = generate(CodebookConfig{n, r});
      for (std::size_t bound : {std::size_t{1}, full.size() / 2 + 1, full.size()}) {
        const Codebook cb = bind_symbols(full, 0, static_cast<std::int64_t>(bound) - 1);
        for (PackedWord p = 0; p < (PackedWord{1} << (2 * n)); ++p) {
          const std::string w = unpack_word(p, n);
          const auto s = decode_robust(NucleotideSequence{w, 1, n}, cb);
          ASSERT_EQ(static_cast<std::size_t>(s.symbols[0]), oracle_nearest(w, cb)) << w;
        }
      }
    }
  }
}

TEST(DecodeRobust, CorruptionStaysLocal) {
  Rng rng(3);
  const Codebook cb = bind_symbols(generate(CodebookConfig{4, 2}), -20, 20);
  for (int trial = 0; trial < 300; ++trial) {
    const SymbolTensor s = random_symbols(rng, cb, 50);
    NucleotideSequence seq = encode(s, cb);
    const std::size_t j = rng.below(50);
    const std::size_t hits = 1 + rng.below(4);
    for (std::size_t h = 0; h < hits; ++h) {
      seq.bases[j * 4 + rng.below(4)] = kBases[rng.below(4)];
    }
    const SymbolTensor d = decode_robust(seq, cb);
    for (std::size_t i = 0; i < 50; ++i) {
      ASSERT_TRUE(cb.binds(d.symbols[i]));
      if (i != j) {
        ASSERT_EQ(d.symbols[i], s.symbols[i]) << "trial " << trial;
      }
    }
  }
}

}  // namespace
}  // namespace dnastore
