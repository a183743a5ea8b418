// Encodes a synthetic image with the reference transform, corrupts the DNA stream at a
// few substitution rates and prints the reconstruction quality.

#include <cmath>
#include <cstdio>

#include "dnastore/dnastore.hpp"

int main() {
  using namespace dnastore;

  Image img(64, 64, 1);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const double r = std::hypot(double(x) - 32.0, double(y) - 32.0);
      img.at(x, y, 0) = static_cast<std::uint8_t>(128.0 + 100.0 * std::cos(r / 5.0));
    }
  }

  const auto transform = TransformChoice::reference();
  const EncodeOutput enc = encode_to_container(img, transform, {0.05, CodebookConfig{3, 2}});
  std::printf("%zu symbols -> %zu nucleotides, entropy %.3f nt/component\n",
              enc.symbols.symbols.size(), enc.container.payload.bases.size(),
              entropy_nt(histogram(enc.symbols)));

  for (double rate : {0.0, 0.01, 0.05, 0.10}) {
    const DecodeOutput dec = decode_container(apply_channel(enc.container, rate, 7), transform);
    std::printf("rate %.2f  PSNR %.2f dB\n", rate, psnr(img, dec.image));
  }
  return 0;
}
