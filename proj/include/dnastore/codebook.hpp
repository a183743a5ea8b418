#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnastore/error.hpp"
#include "dnastore/nucleotide.hpp"

namespace dnastore {

struct CodebookConfig {
  std::size_t codeword_length = 3;
  // Longest permitted run of one nucleotide inside a codeword.
  std::size_t max_run = 2;
  std::optional<double> gc_min;
  std::optional<double> gc_max;
  // When set, the leading run is limited to ceil(max_run/2) and the trailing run to
  // floor(max_run/2), so any concatenation of codewords keeps runs within max_run.
  // With max_run = 1 no codeword qualifies.
  bool boundary_safe = false;

  void validate() const {
    if (codeword_length < 1 || codeword_length > kMaxCodewordLength) {
      throw ConfigError("codeword length must be in [1, " + std::to_string(kMaxCodewordLength) +
                        "], got " + std::to_string(codeword_length));
    }
    if (max_run < 1) throw ConfigError("max_run must be at least 1");
    for (const auto& g : {gc_min, gc_max}) {
      if (g && !(*g >= 0.0 && *g <= 1.0)) throw ConfigError("GC bounds must lie in [0, 1]");
    }
    if (gc_min && gc_max && *gc_min > *gc_max) {
      throw ConfigError("gc_min must not exceed gc_max");
    }
  }

  std::size_t leading_run_limit() const noexcept {
    return boundary_safe ? max_run - max_run / 2 : max_run;
  }
  std::size_t trailing_run_limit() const noexcept {
    return boundary_safe ? max_run / 2 : max_run;
  }

  bool gc_ok(std::size_t gc_count) const noexcept {
    const double frac = static_cast<double>(gc_count) / static_cast<double>(codeword_length);
    if (gc_min && frac < *gc_min) return false;
    if (gc_max && frac > *gc_max) return false;
    return true;
  }

  friend bool operator==(const CodebookConfig&, const CodebookConfig&) = default;
};

namespace detail {

inline bool is_gc(int code) noexcept { return code == 1 || code == 2; }

}  // namespace detail

/// Checks the homopolymer and GC constraints on a single codeword.
inline bool is_valid(std::string_view w, const CodebookConfig& cfg) {
  cfg.validate();
  if (w.size() != cfg.codeword_length) {
    throw DomainError("codeword '" + std::string(w) + "' has length " + std::to_string(w.size()) +
                      ", expected " + std::to_string(cfg.codeword_length));
  }
  std::size_t run = 0, gc = 0, leading = 0;
  bool in_leading = true;
  char prev = '\0';
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int c = base_code(w[i]);
    if (c < 0) {
      throw DomainError(std::string("invalid nucleotide '") + w[i] + "' in codeword '" +
                        std::string(w) + "'");
    }
    if (detail::is_gc(c)) ++gc;
    if (w[i] == prev) {
      ++run;
    } else {
      if (i > 0) in_leading = false;
      run = 1;
    }
    if (in_leading) leading = run;
    if (run > cfg.max_run) return false;
    prev = w[i];
  }
  if (leading > cfg.leading_run_limit() || run > cfg.trailing_run_limit()) return false;
  return cfg.gc_ok(gc);
}

/// Ordered constrained codewords plus, once bound, the symbol -> codeword mapping.
class Codebook {
 public:
  Codebook() = default;
  Codebook(CodebookConfig cfg, std::vector<PackedWord> packed)
      : config_(cfg), packed_(std::move(packed)) {
    words_.reserve(packed_.size());
    for (PackedWord p : packed_) words_.push_back(unpack_word(p, cfg.codeword_length));
  }

  const CodebookConfig& config() const noexcept { return config_; }
  std::size_t codeword_length() const noexcept { return config_.codeword_length; }
  std::size_t size() const noexcept { return words_.size(); }
  std::span<const std::string> words() const noexcept { return words_; }
  std::span<const PackedWord> packed() const noexcept { return packed_; }

  bool is_bound() const noexcept { return bound_count_ > 0; }
  std::int64_t symbol_offset() const noexcept { return symbol_offset_; }
  std::size_t bound_count() const noexcept { return bound_count_; }
  std::int64_t max_symbol() const noexcept {
    return symbol_offset_ + static_cast<std::int64_t>(bound_count_) - 1;
  }
  bool binds(std::int64_t k) const noexcept {
    return is_bound() && k >= symbol_offset_ && k <= max_symbol();
  }

  /// Index of a word in the bound prefix, if present.
  std::optional<std::size_t> bound_index_of(PackedWord p) const noexcept {
    const auto end = packed_.begin() + static_cast<std::ptrdiff_t>(bound_count_);
    const auto it = std::lower_bound(packed_.begin(), end, p);
    if (it == end || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - packed_.begin());
  }

 private:
  friend Codebook bind_symbols(const Codebook&, std::int64_t, std::int64_t);

  CodebookConfig config_;
  std::vector<std::string> words_;
  std::vector<PackedWord> packed_;
  std::int64_t symbol_offset_ = 0;
  std::size_t bound_count_ = 0;
};

namespace detail {

inline void enumerate_words(const CodebookConfig& cfg, std::size_t pos, PackedWord prefix,
                            int last, std::size_t run, std::size_t leading, std::size_t gc,
                            std::vector<PackedWord>& out) {
  if (pos == cfg.codeword_length) {
    if (run <= cfg.trailing_run_limit() && cfg.gc_ok(gc)) out.push_back(prefix);
    return;
  }
  for (int c = 0; c < 4; ++c) {
    const bool same = c == last;
    const std::size_t next_run = same ? run + 1 : 1;
    if (next_run > cfg.max_run) continue;
    // The prefix is a single run exactly when its run length equals its length.
    const std::size_t next_leading = (pos == 0 || (same && run == pos)) ? next_run : leading;
    if (next_leading > cfg.leading_run_limit()) continue;
    enumerate_words(cfg, pos + 1, (prefix << 2) | static_cast<PackedWord>(c), c, next_run,
                    next_leading, gc + (is_gc(c) ? 1 : 0), out);
  }
}

}  // namespace detail

/// All valid codewords of the configured length in ascending A<C<G<T order.
inline Codebook generate(const CodebookConfig& cfg) {
  cfg.validate();
  std::vector<PackedWord> words;
  detail::enumerate_words(cfg, 0, 0, -1, 0, 0, 0, words);
  return Codebook(cfg, std::move(words));
}

/// Number of valid codewords, counted by dynamic programming over
/// (last base, current run, GC count, still inside the leading run).
inline std::uint64_t capacity(const CodebookConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.codeword_length;
  const std::size_t runs = cfg.max_run + 1;
  const std::size_t gcs = n + 1;
  auto index = [&](int last, std::size_t run, std::size_t gc, bool lead) {
    return ((static_cast<std::size_t>(last) * runs + run) * gcs + gc) * 2 + (lead ? 1 : 0);
  };
  std::vector<std::uint64_t> cur(4 * runs * gcs * 2, 0), next(cur.size(), 0);
  for (int c = 0; c < 4; ++c) {
    if (cfg.leading_run_limit() >= 1) cur[index(c, 1, detail::is_gc(c) ? 1 : 0, true)] = 1;
  }
  for (std::size_t pos = 1; pos < n; ++pos) {
    std::fill(next.begin(), next.end(), 0);
    for (int last = 0; last < 4; ++last) {
      for (std::size_t run = 1; run < runs; ++run) {
        for (std::size_t gc = 0; gc < gcs; ++gc) {
          for (int lead = 0; lead < 2; ++lead) {
            const std::uint64_t ways = cur[index(last, run, gc, lead != 0)];
            if (ways == 0) continue;
            for (int c = 0; c < 4; ++c) {
              const bool same = c == last;
              const std::size_t r = same ? run + 1 : 1;
              if (r > cfg.max_run) continue;
              const bool l = lead != 0 && same;
              if (l && r > cfg.leading_run_limit()) continue;
              next[index(c, r, gc + (detail::is_gc(c) ? 1 : 0), l)] += ways;
            }
          }
        }
      }
    }
    std::swap(cur, next);
  }
  std::uint64_t total = 0;
  for (int last = 0; last < 4; ++last) {
    for (std::size_t run = 1; run <= std::min(cfg.max_run, cfg.trailing_run_limit()); ++run) {
      for (std::size_t gc = 0; gc < gcs; ++gc) {
        if (!cfg.gc_ok(gc)) continue;
        total += cur[index(last, run, gc, false)] + cur[index(last, run, gc, true)];
      }
    }
  }
  return total;
}

/// Maps symbols k_min..k_max onto the first codewords in rank order.
inline Codebook bind_symbols(const Codebook& cb, std::int64_t k_min, std::int64_t k_max) {
  if (k_max < k_min) {
    throw ConfigError("empty symbol range [" + std::to_string(k_min) + ", " +
                      std::to_string(k_max) + "]");
  }
  const auto required = static_cast<unsigned long long>(k_max - k_min) + 1;
  if (required > cb.size()) {
    throw CapacityError("codebook holds " + std::to_string(cb.size()) + " codewords but " +
                            std::to_string(required) + " symbols are required",
                        static_cast<long long>(required), static_cast<long long>(cb.size()));
  }
  Codebook out = cb;
  out.symbol_offset_ = k_min;
  out.bound_count_ = static_cast<std::size_t>(required);
  return out;
}

/// Smallest codeword length whose capacity reaches `symbols` under the other
/// constraints of `cfg`, or nullopt if none up to the maximum length does.
inline std::optional<std::size_t> minimal_codeword_length(CodebookConfig cfg,
                                                          std::uint64_t symbols) {
  for (std::size_t n = 1; n <= kMaxCodewordLength; ++n) {
    cfg.codeword_length = n;
    if (capacity(cfg) >= symbols) return n;
  }
  return std::nullopt;
}

/// Text dump: header `n=<int> max_run=<int> capacity=<int>`, then one word per line.
inline void write_codebook(std::ostream& os, const Codebook& cb) {
  os << "n=" << cb.config().codeword_length << " max_run=" << cb.config().max_run
     << " capacity=" << cb.size() << '\n';
  for (const auto& w : cb.words()) os << w << '\n';
}

}  // namespace dnastore
