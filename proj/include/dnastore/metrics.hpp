#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "dnastore/codec.hpp"
#include "dnastore/error.hpp"
#include "dnastore/image.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

/// Pooled symbol counts over every component of a tensor.
struct SymbolHistogram {
  std::map<std::int64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
};

struct RateReport {
  double entropy_nt_per_component = 0.0;
  std::uint64_t nucleotides_total = 0;
  double nt_per_pixel = 0.0;
  // +infinity for identical images.
  double psnr_db = 0.0;
};

inline SymbolHistogram histogram(const SymbolTensor& s) {
  if (s.symbols.empty()) throw DomainError("histogram of an empty symbol tensor");
  SymbolHistogram h;
  for (std::int64_t k : s.symbols) ++h.counts[k];
  h.total = s.symbols.size();
  return h;
}

/// Base-4 Shannon entropy in nucleotides per component; 0 log 0 = 0.
inline double entropy_nt(const SymbolHistogram& h) {
  if (h.total == 0) throw DomainError("entropy of an empty histogram");
  const double total = static_cast<double>(h.total);
  double e = 0.0;
  for (const auto& [k, count] : h.counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / total;
    e -= p * std::log(p);
  }
  return e / std::log(4.0);
}

inline double mse(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw DomainError("cannot compare images of different dimensions");
  }
  if (a.pixels.empty()) throw DomainError("cannot compare empty images");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.pixels.size());
}

inline double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

inline RateReport rate_report(const NucleotideSequence& seq, const SymbolTensor& s,
                              const Image& original, const Image& reconstructed) {
  RateReport r;
  r.entropy_nt_per_component = entropy_nt(histogram(s));
  r.nucleotides_total = seq.bases.size();
  r.nt_per_pixel = static_cast<double>(seq.bases.size()) /
                   static_cast<double>(original.width * original.height);
  r.psnr_db = psnr(original, reconstructed);
  return r;
}

}  // namespace dnastore
