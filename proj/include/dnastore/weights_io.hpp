#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dnastore/bytes.hpp"
#include "dnastore/error.hpp"
#include "dnastore/network.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

// Weight file, all integers little-endian:
//
//   "DNAW"  u32 version=1  u32 latent_channels  f32 quantizer_step_hint
//   encoder section, decoder section:
//     u32 layer_count, then per layer
//       u8 kind
//       f32 slope                       (leaky_relu only)
//       u32 factor                      (subpixel only)
//       u32 out, in, kh, kw, stride     (zero for non-convolution layers)
//       u32 padding
//       f32 x (out*in*kh*kw + out)      (convolution kinds only)
//   u64 FNV-1a of every preceding byte

inline constexpr std::uint32_t kWeightsVersion = 1;

namespace detail {

inline void write_section(ByteWriter& w, const std::vector<LayerSpec>& layers) {
  w.u32(static_cast<std::uint32_t>(layers.size()));
  for (const auto& l : layers) {
    w.u8(static_cast<std::uint8_t>(l.kind));
    if (l.kind == LayerKind::leaky_relu) w.f32(l.slope);
    if (l.kind == LayerKind::subpixel) w.u32(l.factor);
    const bool conv = l.is_conv();
    for (std::uint32_t v : {l.out_channels, l.in_channels, l.kernel_h, l.kernel_w, l.stride,
                            l.padding}) {
      w.u32(conv ? v : 0);
    }
    if (conv) {
      for (float p : l.parameters) w.f32(p);
    }
  }
}

inline std::vector<LayerSpec> read_section(ByteReader& r) {
  const std::uint32_t count = r.u32();
  // Every layer occupies at least 25 bytes.
  if (count > r.remaining() / 25) r.fail("layer count " + std::to_string(count) + " too large");
  std::vector<LayerSpec> layers;
  layers.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    LayerSpec l;
    const std::uint8_t kind = r.u8();
    if (kind < 1 || kind > 7) r.fail("unknown layer kind " + std::to_string(kind));
    l.kind = static_cast<LayerKind>(kind);
    if (l.kind == LayerKind::leaky_relu) l.slope = r.f32();
    if (l.kind == LayerKind::subpixel) l.factor = r.u32();
    l.out_channels = r.u32();
    l.in_channels = r.u32();
    l.kernel_h = r.u32();
    l.kernel_w = r.u32();
    l.stride = r.u32();
    l.padding = r.u32();
    if (l.is_conv()) {
      const std::uint64_t n = std::uint64_t{l.out_channels} * l.in_channels * l.kernel_h *
                                  l.kernel_w + l.out_channels;
      if (n > r.remaining() / 4) r.fail("parameter block exceeds file size");
      l.parameters.resize(static_cast<std::size_t>(n));
      for (float& p : l.parameters) p = r.f32();
    }
    layers.push_back(std::move(l));
  }
  return layers;
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize_weights(const NetworkWeights& w) {
  validate(w);
  ByteWriter out;
  out.raw("DNAW");
  out.u32(kWeightsVersion);
  out.u32(w.latent_channels);
  out.f32(w.quantizer_step_hint);
  detail::write_section(out, w.encoder_layers);
  detail::write_section(out, w.decoder_layers);
  out.seal();
  return std::move(out.bytes());
}

inline NetworkWeights parse_weights(std::span<const std::uint8_t> bytes) {
  const auto body = check_sealed(bytes, "weights");
  ByteReader r(body, "weights");
  const auto magic = r.raw(4);
  if (std::string(magic.begin(), magic.end()) != "DNAW") r.fail("bad magic");
  if (const auto v = r.u32(); v != kWeightsVersion) {
    r.fail("unsupported version " + std::to_string(v));
  }
  NetworkWeights w;
  w.latent_channels = r.u32();
  w.quantizer_step_hint = r.f32();
  w.encoder_layers = detail::read_section(r);
  w.decoder_layers = detail::read_section(r);
  if (r.remaining() != 0) r.fail("trailing bytes after decoder section");
  try {
    validate(w);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("weights: ") + e.what());
  }
  return w;
}

/// The checksum stored in a sealed weight file; identifies the transform in containers.
inline std::uint64_t weights_checksum(std::span<const std::uint8_t> bytes) {
  check_sealed(bytes, "weights");
  ByteReader r(bytes.last(8), "weights");
  return r.u64();
}

inline NetworkWeights load_weights(const std::string& path) {
  return parse_weights(read_file_bytes(path));
}

inline void save_weights(const std::string& path, const NetworkWeights& w) {
  write_file_bytes(path, serialize_weights(w));
}

// Latent debug dump: u32 channels, height, width, then channels*height*width f32 values.

inline std::vector<std::uint8_t> serialize_latent_dump(const LatentTensor& z) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(z.shape.channels));
  w.u32(static_cast<std::uint32_t>(z.shape.height));
  w.u32(static_cast<std::uint32_t>(z.shape.width));
  for (double v : z.values) w.f32(static_cast<float>(v));
  return std::move(w.bytes());
}

inline LatentTensor parse_latent_dump(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "latent dump");
  Shape s;
  s.channels = r.u32();
  s.height = r.u32();
  s.width = r.u32();
  if (r.remaining() != s.size() * 4) r.fail("value count does not match shape " + to_string(s));
  std::vector<double> v(s.size());
  for (double& x : v) x = r.f32();
  return LatentTensor(s, std::move(v));
}

}  // namespace dnastore
