#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "dnastore/channel.hpp"
#include "dnastore/codebook.hpp"
#include "dnastore/codec.hpp"
#include "dnastore/container.hpp"
#include "dnastore/error.hpp"
#include "dnastore/image.hpp"
#include "dnastore/metrics.hpp"
#include "dnastore/network.hpp"
#include "dnastore/quantizer.hpp"
#include "dnastore/reference_transform.hpp"
#include "dnastore/weights_io.hpp"

namespace dnastore {

/// Which analysis/synthesis pair the pipeline runs.
struct TransformChoice {
  TransformKind kind = TransformKind::reference;
  std::optional<NetworkWeights> weights;
  std::uint64_t checksum = 0;
  std::string label = "reference";

  static TransformChoice reference() { return {}; }

  static TransformChoice from_weights_bytes(std::span<const std::uint8_t> bytes,
                                            std::string label = "weights") {
    TransformChoice t;
    t.kind = TransformKind::weights;
    t.weights = parse_weights(bytes);
    t.checksum = weights_checksum(bytes);
    t.label = std::move(label);
    return t;
  }

  /// Accepts "reference" or "weights=<path>".
  static TransformChoice parse(const std::string& spec) {
    if (spec == "reference") return reference();
    const std::string prefix = "weights=";
    if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
      const std::string path = spec.substr(prefix.size());
      return from_weights_bytes(read_file_bytes(path), "weights:" + path);
    }
    throw ConfigError("transform must be 'reference' or 'weights=<path>', got '" + spec + "'");
  }

  std::size_t divisibility() const {
    return kind == TransformKind::reference ? kBlockSize : required_divisibility(*weights);
  }

  LatentTensor forward(const Image& img) const {
    return kind == TransformKind::reference ? reference_forward(img) : encode_image(img, *weights);
  }

  Image inverse(const LatentTensor& z) const {
    return kind == TransformKind::reference ? reference_inverse(z) : decode_latent(z, *weights);
  }
};

struct EncodeSettings {
  double q = 0.1;
  CodebookConfig codebook;
};

struct EncodeOutput {
  DnaContainer container;
  SymbolTensor symbols;
};

struct DecodeOutput {
  Image image;
  SymbolTensor symbols;
};

/// Generates the codebook and binds it to the full symbol range of step q. Capacity
/// failures name the smallest codeword length that would suffice.
inline Codebook bound_codebook(double q, const CodebookConfig& cfg) {
  const SymbolRange range = symbol_range(QuantizerConfig{q, 1.0});
  const std::uint64_t available = capacity(cfg);
  if (static_cast<std::uint64_t>(range.count) > available) {
    std::string msg = "quantizer step " + detail::format_double(q) + " needs " +
                      std::to_string(range.count) + " codewords but n=" +
                      std::to_string(cfg.codeword_length) + " max_run=" +
                      std::to_string(cfg.max_run) + " provides " + std::to_string(available);
    if (const auto n = minimal_codeword_length(cfg, static_cast<std::uint64_t>(range.count))) {
      msg += "; use n=" + std::to_string(*n) + " or larger";
    }
    throw CapacityError(msg, range.count, static_cast<long long>(available));
  }
  return bind_symbols(generate(cfg), range.k_min, range.k_max);
}

/// Q, then alpha_DNA, of the transformed (and edge-padded) image.
inline EncodeOutput encode_to_container(const Image& img, const TransformChoice& transform,
                                        const EncodeSettings& settings) {
  img.validate();
  const Codebook cb = bound_codebook(settings.q, settings.codebook);
  const Image padded = pad_symmetric(img, transform.divisibility());
  const LatentTensor z = transform.forward(padded);
  SymbolTensor symbols = quantize(z, QuantizerConfig{settings.q, 1.0});

  EncodeOutput out;
  auto& h = out.container.header;
  h.width = static_cast<std::uint32_t>(img.width);
  h.height = static_cast<std::uint32_t>(img.height);
  h.channels = static_cast<std::uint32_t>(img.channels);
  h.latent = z.shape;
  h.q = settings.q;
  h.codebook = settings.codebook;
  h.symbol_offset = cb.symbol_offset();
  h.transform = transform.kind;
  h.weights_checksum = transform.kind == TransformKind::weights ? transform.checksum : 0;
  out.container.payload = encode(symbols, cb);
  out.symbols = std::move(symbols);
  return out;
}

/// Passes the payload through a substitution channel and records (rate, seed).
inline DnaContainer apply_channel(const DnaContainer& c, double rate, std::uint64_t seed) {
  DnaContainer out = c;
  out.payload = substitute(c.payload, SubstitutionChannel{rate, seed, std::nullopt});
  out.header.channel_applied = true;
  out.header.channel_rate = rate;
  out.header.channel_seed = seed;
  return out;
}

/// Robust decode, dequantize, synthesize, crop to the true image size.
inline DecodeOutput decode_container(const DnaContainer& c, const TransformChoice& transform) {
  validate(c);
  const auto& h = c.header;
  if (h.transform != transform.kind) {
    throw ConfigError(h.transform == TransformKind::weights
                          ? "container was encoded with a weights file; pass weights=<path>"
                          : "container was encoded with the reference transform");
  }
  if (h.transform == TransformKind::weights && h.weights_checksum != transform.checksum) {
    throw FormatError("weights checksum mismatch: container expects " +
                      std::to_string(h.weights_checksum) + ", file has " +
                      std::to_string(transform.checksum));
  }
  const Codebook cb = bound_codebook(h.q, h.codebook);
  if (cb.symbol_offset() != h.symbol_offset) {
    throw FormatError("container symbol offset " + std::to_string(h.symbol_offset) +
                      " disagrees with quantizer step");
  }
  DecodeOutput out;
  out.symbols = decode_robust(c.payload, cb, h.latent);
  const LatentTensor z = dequantize(out.symbols, QuantizerConfig{h.q, 1.0});
  const Image full = transform.inverse(z);
  if (full.channels != h.channels) {
    throw InferenceError("synthesis produced " + std::to_string(full.channels) +
                         " channels, container expects " + std::to_string(h.channels));
  }
  out.image = crop(full, h.width, h.height);
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
  std::vector<double> rates;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> images;
  std::vector<double> steps;

  void validate() const {
    if (rates.empty() || seeds.empty() || images.empty() || steps.empty()) {
      throw ConfigError("sweep needs at least one rate, seed, image and quantizer step");
    }
    for (double r : rates) {
      if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("sweep rates must lie in [0, 1]");
    }
    for (double q : steps) {
      if (!(q > 0.0)) throw ConfigError("sweep quantizer steps must be positive");
    }
  }
};

struct SweepRow {
  std::string image;  // "avg" for aggregate rows
  std::string transform;
  double q = 0.0;
  std::size_t n = 0;
  double rate = 0.0;
  std::optional<std::uint64_t> seed;  // empty for aggregate rows
  double entropy_nt_per_component = std::numeric_limits<double>::quiet_NaN();
  double nt_per_pixel = std::numeric_limits<double>::quiet_NaN();
  double psnr_db = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

struct NamedImage {
  std::string name;
  std::optional<Image> image;
  std::string load_error;
};

/// Runs fn(0..count-1) on up to `threads` workers; fn must not throw.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// One row per (image, q, rate, seed) in that nesting order, followed by one "avg" row per
/// (q, rate) averaging the successful rows over images and seeds.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::vector<NamedImage>& images,
                                       const TransformChoice& transform,
                                       const CodebookConfig& codebook,
                                       unsigned threads = default_threads()) {
  spec.validate();
  const std::size_t n_img = images.size(), n_q = spec.steps.size();
  const std::size_t n_rate = spec.rates.size(), n_seed = spec.seeds.size();

  struct Encoded {
    std::optional<EncodeOutput> out;
    std::string error;
  };
  std::vector<Encoded> encoded(n_img * n_q);
  parallel_for(encoded.size(), threads, [&](std::size_t j) {
    const NamedImage& img = images[j / n_q];
    if (!img.image) {
      encoded[j].error = img.load_error;
      return;
    }
    try {
      EncodeSettings s{spec.steps[j % n_q], codebook};
      encoded[j].out = encode_to_container(*img.image, transform, s);
    } catch (const std::exception& e) {
      encoded[j].error = e.what();
    }
  });

  std::vector<SweepRow> rows(n_img * n_q * n_rate * n_seed);
  parallel_for(rows.size(), threads, [&](std::size_t j) {
    const std::size_t seed_i = j % n_seed;
    const std::size_t rate_i = (j / n_seed) % n_rate;
    const std::size_t enc_i = j / (n_seed * n_rate);
    SweepRow& row = rows[j];
    row.image = images[enc_i / n_q].name;
    row.transform = transform.label;
    row.q = spec.steps[enc_i % n_q];
    row.n = codebook.codeword_length;
    row.rate = spec.rates[rate_i];
    row.seed = spec.seeds[seed_i];
    const Encoded& enc = encoded[enc_i];
    if (!enc.out) {
      row.status = "error: " + enc.error;
      return;
    }
    try {
      const DnaContainer noisy = apply_channel(enc.out->container, row.rate, *row.seed);
      const DecodeOutput dec = decode_container(noisy, transform);
      const RateReport r =
          rate_report(noisy.payload, enc.out->symbols, *images[enc_i / n_q].image, dec.image);
      row.entropy_nt_per_component = r.entropy_nt_per_component;
      row.nt_per_pixel = r.nt_per_pixel;
      row.psnr_db = r.psnr_db;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  for (std::size_t qi = 0; qi < n_q; ++qi) {
    for (std::size_t ri = 0; ri < n_rate; ++ri) {
      SweepRow avg;
      avg.image = "avg";
      avg.transform = transform.label;
      avg.q = spec.steps[qi];
      avg.n = codebook.codeword_length;
      avg.rate = spec.rates[ri];
      double e = 0.0, npp = 0.0, p = 0.0;
      std::size_t ok = 0;
      for (std::size_t ii = 0; ii < n_img; ++ii) {
        for (std::size_t si = 0; si < n_seed; ++si) {
          const SweepRow& r = rows[((ii * n_q + qi) * n_rate + ri) * n_seed + si];
          if (!r.ok()) continue;
          e += r.entropy_nt_per_component;
          npp += r.nt_per_pixel;
          p += r.psnr_db;
          ++ok;
        }
      }
      if (ok == 0) {
        avg.status = "error: no successful rows";
      } else {
        avg.entropy_nt_per_component = e / static_cast<double>(ok);
        avg.nt_per_pixel = npp / static_cast<double>(ok);
        avg.psnr_db = p / static_cast<double>(ok);
      }
      rows.push_back(std::move(avg));
    }
  }
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const TransformChoice& transform,
                                       const CodebookConfig& codebook,
                                       unsigned threads = default_threads()) {
  spec.validate();
  std::vector<NamedImage> images;
  for (const auto& path : spec.images) {
    NamedImage ni;
    ni.name = path;
    try {
      ni.image = read_pnm(path);
    } catch (const std::exception& e) {
      ni.load_error = e.what();
    }
    images.push_back(std::move(ni));
  }
  return run_sweep(spec, images, transform, codebook, threads);
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader =
    "image,transform,q,n,rate,seed,entropy_nt_per_component,nt_per_pixel,psnr_db,status";

namespace detail {

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

}  // namespace detail

inline std::string to_csv_row(const SweepRow& r) {
  using detail::csv_field;
  using detail::csv_number;
  return csv_field(r.image) + ',' + csv_field(r.transform) + ',' + csv_number(r.q) + ',' +
         std::to_string(r.n) + ',' + csv_number(r.rate) + ',' +
         (r.seed ? std::to_string(*r.seed) : std::string()) + ',' +
         csv_number(r.entropy_nt_per_component) + ',' + csv_number(r.nt_per_pixel) + ',' +
         csv_number(r.psnr_db) + ',' + csv_field(r.status);
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) os << to_csv_row(r) << '\n';
}

}  // namespace dnastore
