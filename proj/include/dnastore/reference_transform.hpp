#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dnastore/error.hpp"
#include "dnastore/image.hpp"
#include "dnastore/network.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

// Deterministic stand-in for the learned transforms: per channel and 8x8 block, the
// orthonormal 2D DCT-II of the normalized pixels, divided by 8. Each coefficient is an
// inner product of a vector with norm <= 8 against a unit basis vector, so the scaled
// coefficients stay in [-1, 1]. Computed in double precision; the latent keeps the
// image layout (channels, height, width) with coefficient (u, v) of a block at its
// (row, column) offset.

inline constexpr std::size_t kBlockSize = 8;

namespace detail {

using DctMatrix = std::array<std::array<double, kBlockSize>, kBlockSize>;

inline const DctMatrix& dct_matrix() {
  static const DctMatrix m = [] {
    DctMatrix c{};
    for (std::size_t u = 0; u < kBlockSize; ++u) {
      const double a = u == 0 ? std::sqrt(1.0 / kBlockSize) : std::sqrt(2.0 / kBlockSize);
      for (std::size_t x = 0; x < kBlockSize; ++x) {
        c[u][x] = a * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / (2.0 * kBlockSize));
      }
    }
    return c;
  }();
  return m;
}

using Block = std::array<std::array<double, kBlockSize>, kBlockSize>;

// out = C * in * C^T (forward) or C^T * in * C (inverse).
inline Block dct2(const Block& in, bool inverse) {
  const DctMatrix& c = dct_matrix();
  auto m = [&](std::size_t i, std::size_t j) { return inverse ? c[j][i] : c[i][j]; };
  Block tmp{}, out{};
  for (std::size_t i = 0; i < kBlockSize; ++i) {
    for (std::size_t j = 0; j < kBlockSize; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < kBlockSize; ++k) s += m(i, k) * in[k][j];
      tmp[i][j] = s;
    }
  }
  for (std::size_t i = 0; i < kBlockSize; ++i) {
    for (std::size_t j = 0; j < kBlockSize; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < kBlockSize; ++k) s += tmp[i][k] * m(j, k);
      out[i][j] = s;
    }
  }
  return out;
}

inline void check_block_dims(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0 || width % kBlockSize != 0 || height % kBlockSize != 0) {
    throw DomainError("reference transform needs dimensions divisible by 8, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace detail

inline LatentTensor reference_forward(const Image& img) {
  img.validate();
  detail::check_block_dims(img.width, img.height);
  LatentTensor z(Shape{img.channels, img.height, img.width});
  for (std::size_t c = 0; c < img.channels; ++c) {
    for (std::size_t by = 0; by < img.height; by += kBlockSize) {
      for (std::size_t bx = 0; bx < img.width; bx += kBlockSize) {
        detail::Block b{};
        for (std::size_t y = 0; y < kBlockSize; ++y) {
          for (std::size_t x = 0; x < kBlockSize; ++x) {
            b[y][x] = img.at(bx + x, by + y, c) / 127.5 - 1.0;
          }
        }
        const detail::Block coef = detail::dct2(b, false);
        for (std::size_t u = 0; u < kBlockSize; ++u) {
          for (std::size_t v = 0; v < kBlockSize; ++v) {
            z.at(c, by + u, bx + v) = std::clamp(coef[u][v] / kBlockSize, -1.0, 1.0);
          }
        }
      }
    }
  }
  return z;
}

inline Image reference_inverse(const LatentTensor& z) {
  detail::check_block_dims(z.shape.width, z.shape.height);
  Image img(z.shape.width, z.shape.height, z.shape.channels);
  for (std::size_t c = 0; c < z.shape.channels; ++c) {
    for (std::size_t by = 0; by < z.shape.height; by += kBlockSize) {
      for (std::size_t bx = 0; bx < z.shape.width; bx += kBlockSize) {
        detail::Block coef{};
        for (std::size_t u = 0; u < kBlockSize; ++u) {
          for (std::size_t v = 0; v < kBlockSize; ++v) {
            coef[u][v] = z.at(c, by + u, bx + v) * kBlockSize;
          }
        }
        const detail::Block b = detail::dct2(coef, true);
        for (std::size_t y = 0; y < kBlockSize; ++y) {
          for (std::size_t x = 0; x < kBlockSize; ++x) {
            img.at(bx + x, by + y, c) = denormalize_pixel(b[y][x]);
          }
        }
      }
    }
  }
  return img;
}

}  // namespace dnastore
