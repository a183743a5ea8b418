#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "dnastore/error.hpp"

namespace dnastore {

/// 8-bit image, row-major, channel-interleaved. One (gray) or three (RGB) channels.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, std::size_t c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), pixels(w * h * c, fill) {
    validate();
  }

  void validate() const {
    if (width == 0 || height == 0) throw DomainError("image dimensions must be positive");
    if (channels != 1 && channels != 3) {
      throw DomainError("image must have 1 or 3 channels, got " + std::to_string(channels));
    }
    if (pixels.size() != width * height * channels) {
      throw DomainError("pixel buffer size does not match " + std::to_string(width) + "x" +
                        std::to_string(height) + "x" + std::to_string(channels));
    }
  }

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
    return pixels[(y * width + x) * channels + c];
  }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
    return pixels[(y * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

namespace detail {

inline std::size_t read_pnm_number(std::istream& is) {
  int ch = is.get();
  for (;;) {
    while (ch != EOF && std::isspace(ch)) ch = is.get();
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = is.get();
      continue;
    }
    break;
  }
  if (ch == EOF || !std::isdigit(ch)) throw FormatError("malformed PNM header");
  std::size_t v = 0;
  while (ch != EOF && std::isdigit(ch)) {
    v = v * 10 + static_cast<std::size_t>(ch - '0');
    if (v > (1u << 24)) throw FormatError("PNM header value too large");
    ch = is.get();
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (ch == EOF || !std::isspace(ch)) throw FormatError("malformed PNM header");
  return v;
}

}  // namespace detail

/// Binary PGM (P5) or PPM (P6) with maxval 255.
inline Image read_pnm(std::istream& is) {
  char magic[2] = {};
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw FormatError("not a binary PGM/PPM image (expected P5 or P6)");
  }
  Image img;
  img.channels = magic[1] == '5' ? 1 : 3;
  img.width = detail::read_pnm_number(is);
  img.height = detail::read_pnm_number(is);
  const std::size_t maxval = detail::read_pnm_number(is);
  if (maxval != 255) throw FormatError("only maxval 255 is supported");
  if (img.width == 0 || img.height == 0) throw FormatError("PNM image has zero size");
  img.pixels.resize(img.width * img.height * img.channels);
  is.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(is.gcount()) != img.pixels.size()) {
    throw FormatError("PNM raster is truncated");
  }
  return img;
}

inline Image read_pnm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open image '" + path + "'");
  return read_pnm(f);
}

inline void write_pnm(std::ostream& os, const Image& img) {
  img.validate();
  os << (img.channels == 1 ? "P5" : "P6") << '\n'
     << img.width << ' ' << img.height << '\n'
     << 255 << '\n';
  os.write(reinterpret_cast<const char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
}

inline void write_pnm(const std::string& path, const Image& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write image '" + path + "'");
  write_pnm(f, img);
  if (!f) throw FormatError("failed writing image '" + path + "'");
}

inline std::size_t round_up(std::size_t v, std::size_t multiple) {
  return (v + multiple - 1) / multiple * multiple;
}

/// Extends the image to the next multiple of `multiple` on the right and bottom by
/// mirroring (edge sample repeated: ... c b a | a b c ...).
inline Image pad_symmetric(const Image& img, std::size_t multiple) {
  img.validate();
  const std::size_t w = round_up(img.width, multiple), h = round_up(img.height, multiple);
  if (w == img.width && h == img.height) return img;
  auto mirror = [](std::size_t i, std::size_t n) {
    const std::size_t period = 2 * n;
    i %= period;
    return i < n ? i : period - 1 - i;
  };
  Image out(w, h, img.channels);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < img.channels; ++c) {
        out.at(x, y, c) = img.at(mirror(x, img.width), mirror(y, img.height), c);
      }
    }
  }
  return out;
}

inline Image crop(const Image& img, std::size_t width, std::size_t height) {
  if (width > img.width || height > img.height) {
    throw DomainError("crop " + std::to_string(width) + "x" + std::to_string(height) +
                      " exceeds image " + std::to_string(img.width) + "x" +
                      std::to_string(img.height));
  }
  Image out(width, height, img.channels);
  for (std::size_t y = 0; y < height; ++y) {
    const auto* src = &img.pixels[y * img.width * img.channels];
    std::copy(src, src + width * img.channels, &out.pixels[y * width * img.channels]);
  }
  return out;
}

}  // namespace dnastore
