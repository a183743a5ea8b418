#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dnastore/error.hpp"

namespace dnastore {

/// (channels, height, width) of a latent or symbol tensor. Elements are stored
/// row-major with channel outermost.
struct Shape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return channels * height * width; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" + std::to_string(s.width);
}

struct QuantizerConfig {
  double step = 1.0;
  // Half-width of the latent range. Fixed by the tanh bounding of the analysis transform.
  double bound = 1.0;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw DomainError("quantizer step must be a positive finite number, got " + std::to_string(step));
    }
    if (!(bound > 0.0) || !std::isfinite(bound)) {
      throw DomainError("quantizer bound must be a positive finite number");
    }
  }
};

/// Real-valued latent, every value within [-bound, bound].
struct LatentTensor {
  Shape shape;
  std::vector<double> values;

  LatentTensor() = default;
  explicit LatentTensor(Shape s) : shape(s), values(s.size(), 0.0) {}
  LatentTensor(Shape s, std::vector<double> v) : shape(s), values(std::move(v)) {
    if (values.size() != shape.size()) {
      throw DomainError("latent value count " + std::to_string(values.size()) +
                        " does not match shape " + to_string(shape));
    }
  }

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return values[(c * shape.height + y) * shape.width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * shape.height + y) * shape.width + x];
  }
};

/// Integer quantization indices k; the reconstruction value is k * step.
struct SymbolTensor {
  Shape shape;
  std::vector<std::int64_t> symbols;

  SymbolTensor() = default;
  SymbolTensor(Shape s, std::vector<std::int64_t> k) : shape(s), symbols(std::move(k)) {
    if (symbols.size() != shape.size()) {
      throw DomainError("symbol count " + std::to_string(symbols.size()) +
                        " does not match shape " + to_string(shape));
    }
  }

  friend bool operator==(const SymbolTensor&, const SymbolTensor&) = default;
};

struct SymbolRange {
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
  std::int64_t count = 0;

  bool contains(std::int64_t k) const noexcept { return k >= k_min && k <= k_max; }
};

/// floor(z / step + 1/2). Ties at cell edges round up.
inline std::int64_t quantize_value(double z, double step) {
  return static_cast<std::int64_t>(std::floor(z / step + 0.5));
}

inline SymbolRange symbol_range(const QuantizerConfig& cfg) {
  cfg.validate();
  SymbolRange r;
  r.k_min = quantize_value(-cfg.bound, cfg.step);
  r.k_max = quantize_value(cfg.bound, cfg.step);
  r.count = r.k_max - r.k_min + 1;
  return r;
}

inline SymbolTensor quantize(const LatentTensor& z, const QuantizerConfig& cfg) {
  cfg.validate();
  std::vector<std::int64_t> k(z.values.size());
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    const double v = z.values[i];
    if (!(std::abs(v) <= cfg.bound)) {
      throw DomainError("latent value " + std::to_string(v) + " at index " + std::to_string(i) +
                        " lies outside [-" + std::to_string(cfg.bound) + ", " +
                        std::to_string(cfg.bound) + "]");
    }
    k[i] = quantize_value(v, cfg.step);
  }
  return SymbolTensor(z.shape, std::move(k));
}

/// k * step, clamped to the bounded latent interval.
inline LatentTensor dequantize(const SymbolTensor& s, const QuantizerConfig& cfg) {
  const SymbolRange range = symbol_range(cfg);
  std::vector<double> v(s.symbols.size());
  for (std::size_t i = 0; i < s.symbols.size(); ++i) {
    const std::int64_t k = s.symbols[i];
    if (!range.contains(k)) {
      throw DomainError("symbol " + std::to_string(k) + " at index " + std::to_string(i) +
                        " outside quantizer range [" + std::to_string(range.k_min) + ", " +
                        std::to_string(range.k_max) + "]");
    }
    const double r = static_cast<double>(k) * cfg.step;
    v[i] = r > cfg.bound ? cfg.bound : (r < -cfg.bound ? -cfg.bound : r);
  }
  return LatentTensor(s.shape, std::move(v));
}

}  // namespace dnastore
