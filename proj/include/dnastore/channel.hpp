#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

#include "dnastore/codec.hpp"
#include "dnastore/error.hpp"
#include "dnastore/nucleotide.hpp"
#include "dnastore/quantizer.hpp"
#include "dnastore/random.hpp"

namespace dnastore {

/// Row = true base (A,C,G,T), column = substituted base. Diagonal entries are ignored;
/// off-diagonal weights need not sum to one.
using ConfusionMatrix = std::array<std::array<double, 4>, 4>;

struct SubstitutionChannel {
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::optional<ConfusionMatrix> confusion;

  void validate() const {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ConfigError("substitution rate must lie in [0, 1], got " + std::to_string(rate));
    }
    if (confusion) {
      for (int from = 0; from < 4; ++from) {
        double row = 0.0;
        for (int to = 0; to < 4; ++to) {
          const double w = (*confusion)[from][to];
          if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigError("confusion weights must be finite and non-negative");
          }
          if (to != from) row += w;
        }
        if (!(row > 0.0)) throw ConfigError("confusion row has no off-diagonal weight");
      }
    }
  }
};

struct LatentNoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw ConfigError("latent noise sigma must be finite and non-negative");
    }
  }
};

/// Replaces each base independently with probability `rate`. The replacement is drawn
/// uniformly from the other three bases, or from the confusion row when configured.
/// Distinct nonces give independent, reproducible streams for one channel.
inline NucleotideSequence substitute(const NucleotideSequence& seq, const SubstitutionChannel& ch,
                                     std::uint64_t nonce = 0) {
  ch.validate();
  NucleotideSequence out = seq;
  if (ch.rate == 0.0) return out;
  Rng rng(ch.seed, nonce);
  for (std::size_t i = 0; i < out.bases.size(); ++i) {
    const int from = base_code(out.bases[i]);
    if (from < 0) {
      throw FormatError(std::string("invalid nucleotide '") + out.bases[i] + "' at position " +
                        std::to_string(i));
    }
    if (!(rng.uniform01() < ch.rate)) continue;
    int to;
    if (!ch.confusion) {
      const auto r = static_cast<int>(rng.below(3));
      to = r >= from ? r + 1 : r;
    } else {
      const auto& row = (*ch.confusion)[static_cast<std::size_t>(from)];
      double total = 0.0;
      for (int c = 0; c < 4; ++c) total += c == from ? 0.0 : row[c];
      double u = rng.uniform01() * total;
      to = -1;
      for (int c = 0; c < 4 && (to < 0 || u >= 0.0); ++c) {
        if (c == from || row[c] == 0.0) continue;
        to = c;
        u -= row[c];
      }
    }
    out.bases[i] = kBases[static_cast<std::size_t>(to)];
  }
  return out;
}

/// Adds i.i.d. zero-mean Gaussian noise to every component, then clamps to the bound.
inline LatentTensor perturb_latent(const LatentTensor& z, const LatentNoiseModel& m,
                                   double bound = 1.0, std::uint64_t nonce = 0) {
  m.validate();
  LatentTensor out = z;
  if (m.sigma == 0.0) return out;
  Rng rng(m.seed, nonce);
  for (double& v : out.values) v = std::clamp(v + m.sigma * rng.gaussian(), -bound, bound);
  return out;
}

}  // namespace dnastore
