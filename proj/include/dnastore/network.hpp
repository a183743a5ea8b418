#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dnastore/error.hpp"
#include "dnastore/image.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

/// Dense float activations, channel-major (c, y, x).
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(std::size_t c, std::size_t h, std::size_t w, float fill = 0.0f)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return data[(c * height + y) * width + x];
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }
  bool same_shape(const FeatureMap& o) const noexcept {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

enum class LayerKind : std::uint8_t {
  conv = 1,
  transposed_conv = 2,
  leaky_relu = 3,
  tanh = 4,
  residual_begin = 5,
  residual_end = 6,
  subpixel = 7,
};

inline const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::conv: return "conv";
    case LayerKind::transposed_conv: return "transposed_conv";
    case LayerKind::leaky_relu: return "leaky_relu";
    case LayerKind::tanh: return "tanh";
    case LayerKind::residual_begin: return "residual_begin";
    case LayerKind::residual_end: return "residual_end";
    case LayerKind::subpixel: return "subpixel";
  }
  return "unknown";
}

/// One entry of a declarative layer stack. Convolution parameters hold the kernel as
/// (out, in, kh, kw) row-major followed by one bias per output channel; the same layout
/// is used for transposed convolutions.
struct LayerSpec {
  LayerKind kind = LayerKind::tanh;
  std::uint32_t out_channels = 0;
  std::uint32_t in_channels = 0;
  std::uint32_t kernel_h = 0;
  std::uint32_t kernel_w = 0;
  std::uint32_t stride = 0;
  std::uint32_t padding = 0;
  float slope = 0.0f;         // leaky_relu
  std::uint32_t factor = 0;   // subpixel
  std::vector<float> parameters;

  bool is_conv() const noexcept {
    return kind == LayerKind::conv || kind == LayerKind::transposed_conv;
  }
  std::size_t weight_count() const noexcept {
    return std::size_t{out_channels} * in_channels * kernel_h * kernel_w;
  }
  std::size_t expected_parameter_count() const noexcept {
    return is_conv() ? weight_count() + out_channels : 0;
  }
  std::span<const float> weights() const noexcept {
    return std::span<const float>(parameters).first(weight_count());
  }
  std::span<const float> biases() const noexcept {
    return std::span<const float>(parameters).subspan(weight_count(), out_channels);
  }
  float weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const noexcept {
    return parameters[((o * in_channels + i) * kernel_h + ky) * kernel_w + kx];
  }

  static LayerSpec conv(std::uint32_t out, std::uint32_t in, std::uint32_t kh, std::uint32_t kw,
                        std::uint32_t stride, std::uint32_t padding, std::vector<float> params) {
    return {LayerKind::conv, out, in, kh, kw, stride, padding, 0.0f, 0, std::move(params)};
  }
  static LayerSpec transposed_conv(std::uint32_t out, std::uint32_t in, std::uint32_t kh,
                                   std::uint32_t kw, std::uint32_t stride, std::uint32_t padding,
                                   std::vector<float> params) {
    return {LayerKind::transposed_conv, out, in, kh, kw, stride, padding, 0.0f, 0,
            std::move(params)};
  }
  static LayerSpec leaky_relu(float slope) {
    LayerSpec l;
    l.kind = LayerKind::leaky_relu;
    l.slope = slope;
    return l;
  }
  static LayerSpec tanh_layer() { return LayerSpec{}; }
  static LayerSpec residual_begin() {
    LayerSpec l;
    l.kind = LayerKind::residual_begin;
    return l;
  }
  static LayerSpec residual_end() {
    LayerSpec l;
    l.kind = LayerKind::residual_end;
    return l;
  }
  static LayerSpec subpixel(std::uint32_t factor) {
    LayerSpec l;
    l.kind = LayerKind::subpixel;
    l.factor = factor;
    return l;
  }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Analysis (encoder) and synthesis (decoder) layer stacks.
struct NetworkWeights {
  std::vector<LayerSpec> encoder_layers;
  std::vector<LayerSpec> decoder_layers;
  std::uint32_t latent_channels = 0;
  float quantizer_step_hint = 0.0f;

  friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

namespace detail {

inline std::string layer_label(std::size_t index, const LayerSpec& l) {
  return "layer " + std::to_string(index) + " (" + to_string(l.kind) + ")";
}

inline void validate_stack(const std::vector<LayerSpec>& layers, const char* section) {
  int depth = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    const std::string where = std::string(section) + " " + layer_label(i, l);
    if (l.is_conv()) {
      if (l.out_channels == 0 || l.in_channels == 0 || l.kernel_h == 0 || l.kernel_w == 0 ||
          l.stride == 0) {
        throw ConfigError(where + ": convolution dimensions and stride must be positive");
      }
    }
    if (l.parameters.size() != l.expected_parameter_count()) {
      throw ConfigError(where + ": expected " + std::to_string(l.expected_parameter_count()) +
                        " parameters, found " + std::to_string(l.parameters.size()));
    }
    if (l.kind == LayerKind::subpixel && l.factor == 0) {
      throw ConfigError(where + ": subpixel factor must be positive");
    }
    if (l.kind == LayerKind::residual_begin) ++depth;
    if (l.kind == LayerKind::residual_end && --depth < 0) {
      throw ConfigError(where + ": residual_end without matching residual_begin");
    }
  }
  if (depth != 0) throw ConfigError(std::string(section) + ": unterminated residual block");
}

}  // namespace detail

inline void validate(const NetworkWeights& w) {
  if (w.encoder_layers.empty() || w.encoder_layers.back().kind != LayerKind::tanh) {
    throw ConfigError("encoder must end with a tanh layer");
  }
  if (w.latent_channels == 0) throw ConfigError("latent_channels must be positive");
  detail::validate_stack(w.encoder_layers, "encoder");
  detail::validate_stack(w.decoder_layers, "decoder");
}

/// Cross-correlation with zero padding; out = floor((in + 2*pad - k) / stride) + 1.
inline FeatureMap conv2d(const FeatureMap& in, const LayerSpec& l, std::size_t layer_index = 0) {
  if (in.channels != l.in_channels) {
    throw InferenceError(detail::layer_label(layer_index, l) + ": expects " +
                         std::to_string(l.in_channels) + " input channels, got " +
                         std::to_string(in.channels));
  }
  const long pad = l.padding, stride = l.stride;
  const long padded_h = static_cast<long>(in.height) + 2 * pad;
  const long padded_w = static_cast<long>(in.width) + 2 * pad;
  if (padded_h < static_cast<long>(l.kernel_h) || padded_w < static_cast<long>(l.kernel_w)) {
    throw InferenceError(detail::layer_label(layer_index, l) + ": kernel larger than input");
  }
  const std::size_t oh = static_cast<std::size_t>((padded_h - l.kernel_h) / stride + 1);
  const std::size_t ow = static_cast<std::size_t>((padded_w - l.kernel_w) / stride + 1);
  FeatureMap out(l.out_channels, oh, ow);
  const auto bias = l.biases();
  for (std::size_t o = 0; o < l.out_channels; ++o) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        float acc = bias[o];
        for (std::size_t i = 0; i < l.in_channels; ++i) {
          for (std::size_t ky = 0; ky < l.kernel_h; ++ky) {
            const long iy = static_cast<long>(y) * stride - pad + static_cast<long>(ky);
            if (iy < 0 || iy >= static_cast<long>(in.height)) continue;
            for (std::size_t kx = 0; kx < l.kernel_w; ++kx) {
              const long ix = static_cast<long>(x) * stride - pad + static_cast<long>(kx);
              if (ix < 0 || ix >= static_cast<long>(in.width)) continue;
              acc += l.weight(o, i, ky, kx) *
                     in.at(i, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
            }
          }
        }
        out.at(o, y, x) = acc;
      }
    }
  }
  return out;
}

/// Adjoint of a strided convolution; out = (in - 1)*stride - 2*pad + k.
inline FeatureMap transposed_conv2d(const FeatureMap& in, const LayerSpec& l,
                                    std::size_t layer_index = 0) {
  if (in.channels != l.in_channels) {
    throw InferenceError(detail::layer_label(layer_index, l) + ": expects " +
                         std::to_string(l.in_channels) + " input channels, got " +
                         std::to_string(in.channels));
  }
  const long pad = l.padding, stride = l.stride;
  const long oh = (static_cast<long>(in.height) - 1) * stride - 2 * pad + l.kernel_h;
  const long ow = (static_cast<long>(in.width) - 1) * stride - 2 * pad + l.kernel_w;
  if (oh <= 0 || ow <= 0) {
    throw InferenceError(detail::layer_label(layer_index, l) + ": padding leaves no output");
  }
  FeatureMap out(l.out_channels, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow));
  const auto bias = l.biases();
  for (std::size_t o = 0; o < l.out_channels; ++o) {
    for (std::size_t i = 0; i < l.in_channels; ++i) {
      for (std::size_t y = 0; y < in.height; ++y) {
        for (std::size_t x = 0; x < in.width; ++x) {
          const float v = in.at(i, y, x);
          for (std::size_t ky = 0; ky < l.kernel_h; ++ky) {
            const long oy = static_cast<long>(y) * stride - pad + static_cast<long>(ky);
            if (oy < 0 || oy >= oh) continue;
            for (std::size_t kx = 0; kx < l.kernel_w; ++kx) {
              const long ox = static_cast<long>(x) * stride - pad + static_cast<long>(kx);
              if (ox < 0 || ox >= ow) continue;
              out.at(o, static_cast<std::size_t>(oy), static_cast<std::size_t>(ox)) +=
                  l.weight(o, i, ky, kx) * v;
            }
          }
        }
      }
    }
    for (std::size_t p = 0; p < out.height * out.width; ++p) {
      out.data[o * out.height * out.width + p] += bias[o];
    }
  }
  return out;
}

/// Depth-to-space: out[c][y*r + dy][x*r + dx] = in[c*r*r + dy*r + dx][y][x].
inline FeatureMap subpixel_upsample(const FeatureMap& in, std::uint32_t r,
                                    std::size_t layer_index = 0) {
  const std::size_t rr = std::size_t{r} * r;
  if (r == 0 || in.channels % rr != 0) {
    throw InferenceError("layer " + std::to_string(layer_index) +
                         " (subpixel): channel count " + std::to_string(in.channels) +
                         " not divisible by factor^2 = " + std::to_string(rr));
  }
  FeatureMap out(in.channels / rr, in.height * r, in.width * r);
  for (std::size_t c = 0; c < out.channels; ++c) {
    for (std::size_t dy = 0; dy < r; ++dy) {
      for (std::size_t dx = 0; dx < r; ++dx) {
        const std::size_t src = c * rr + dy * r + dx;
        for (std::size_t y = 0; y < in.height; ++y) {
          for (std::size_t x = 0; x < in.width; ++x) {
            out.at(c, y * r + dy, x * r + dx) = in.at(src, y, x);
          }
        }
      }
    }
  }
  return out;
}

/// Runs a layer stack. residual_begin saves the current activation; the matching
/// residual_end adds it back.
inline FeatureMap run_layers(FeatureMap x, const std::vector<LayerSpec>& layers) {
  std::vector<FeatureMap> skips;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    switch (l.kind) {
      case LayerKind::conv: x = conv2d(x, l, i); break;
      case LayerKind::transposed_conv: x = transposed_conv2d(x, l, i); break;
      case LayerKind::leaky_relu:
        for (float& v : x.data) v = v < 0.0f ? v * l.slope : v;
        break;
      case LayerKind::tanh:
        for (float& v : x.data) v = std::tanh(v);
        break;
      case LayerKind::residual_begin: skips.push_back(x); break;
      case LayerKind::residual_end: {
        if (skips.empty()) {
          throw InferenceError(detail::layer_label(i, l) + ": no open residual block");
        }
        const FeatureMap& skip = skips.back();
        if (!skip.same_shape(x)) {
          throw InferenceError(detail::layer_label(i, l) + ": residual branch changed shape");
        }
        for (std::size_t p = 0; p < x.data.size(); ++p) x.data[p] += skip.data[p];
        skips.pop_back();
        break;
      }
      case LayerKind::subpixel: x = subpixel_upsample(x, l.factor, i); break;
      default:
        throw InferenceError(detail::layer_label(i, l) + ": unsupported layer kind");
    }
  }
  return x;
}

inline float normalize_pixel(std::uint8_t p) noexcept {
  return static_cast<float>(p) / 127.5f - 1.0f;
}

inline std::uint8_t denormalize_pixel(double v) noexcept {
  const double p = std::round((v + 1.0) * 127.5);
  return static_cast<std::uint8_t>(std::clamp(p, 0.0, 255.0));
}

/// Spatial divisibility the encoder needs: product of its convolution strides.
inline std::size_t required_divisibility(const NetworkWeights& w) {
  std::size_t d = 1;
  for (const auto& l : w.encoder_layers) {
    if (l.kind == LayerKind::conv) d *= l.stride;
  }
  return d;
}

inline LatentTensor encode_image(const Image& img, const NetworkWeights& w) {
  img.validate();
  validate(w);
  const std::size_t d = required_divisibility(w);
  if (img.width % d != 0 || img.height % d != 0) {
    throw InferenceError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " must have dimensions divisible by " + std::to_string(d));
  }
  FeatureMap x(img.channels, img.height, img.width);
  for (std::size_t c = 0; c < img.channels; ++c) {
    for (std::size_t y = 0; y < img.height; ++y) {
      for (std::size_t xx = 0; xx < img.width; ++xx) {
        x.at(c, y, xx) = normalize_pixel(img.at(xx, y, c));
      }
    }
  }
  x = run_layers(std::move(x), w.encoder_layers);
  if (x.channels != w.latent_channels) {
    throw InferenceError("encoder produced " + std::to_string(x.channels) +
                         " channels, weights declare " + std::to_string(w.latent_channels));
  }
  LatentTensor z(Shape{x.channels, x.height, x.width});
  for (std::size_t p = 0; p < x.data.size(); ++p) {
    z.values[p] = std::clamp(static_cast<double>(x.data[p]), -1.0, 1.0);
  }
  return z;
}

inline Image decode_latent(const LatentTensor& z, const NetworkWeights& w) {
  validate(w);
  if (z.shape.channels != w.latent_channels) {
    throw InferenceError("latent has " + std::to_string(z.shape.channels) +
                         " channels, decoder expects " + std::to_string(w.latent_channels));
  }
  FeatureMap x(z.shape.channels, z.shape.height, z.shape.width);
  for (std::size_t p = 0; p < z.values.size(); ++p) x.data[p] = static_cast<float>(z.values[p]);
  x = run_layers(std::move(x), w.decoder_layers);
  if (x.channels != 1 && x.channels != 3) {
    throw InferenceError("decoder produced " + std::to_string(x.channels) +
                         " channels, an image needs 1 or 3");
  }
  Image img(x.width, x.height, x.channels);
  for (std::size_t c = 0; c < x.channels; ++c) {
    for (std::size_t y = 0; y < x.height; ++y) {
      for (std::size_t xx = 0; xx < x.width; ++xx) {
        img.at(xx, y, c) = denormalize_pixel(x.at(c, y, xx));
      }
    }
  }
  return img;
}

}  // namespace dnastore
