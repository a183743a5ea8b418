// Acceptance suite: one PASS/FAIL line per criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dnastore/dnastore.hpp"
#include "test_images.hpp"

namespace {

using namespace dnastore;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0 means unlimited
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Independent brute-force validity test for a candidate word given as base codes.
bool brute_valid(const std::vector<int>& w, std::size_t max_run) {
  std::size_t run = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    run = w[i] == w[i - 1] ? run + 1 : 1;
    if (run > max_run) return false;
  }
  return true;
}

std::string to_bases(std::vector<int> w) {
  std::string s;
  for (int c : w) s += "ACGT"[c];
  return s;
}

std::vector<std::string> all_strings(std::size_t n) {
  std::vector<std::string> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  for (std::size_t v = 0; v < total; ++v) {
    std::vector<int> w(n);
    std::size_t x = v;
    for (std::size_t i = n; i-- > 0; x /= 4) w[i] = static_cast<int>(x % 4);
    out.push_back(to_bases(w));
  }
  return out;
}

Outcome losslessness() {
  Rng rng(2024);
  const double steps[] = {1.0, 0.5, 0.25};
  const std::size_t lengths[] = {2, 3, 4};
  for (int t = 0; t < 100; ++t) {
    const double q = steps[t % 3];
    CodebookConfig cfg;
    cfg.codeword_length = lengths[(t / 3) % 3];
    const SymbolRange r = symbol_range(QuantizerConfig{q, 1.0});
    const Codebook cb = bind_symbols(generate(cfg), r.k_min, r.k_max);
    const Shape shape{1 + rng.below(3), 1 + rng.below(16), 1 + rng.below(16)};
    std::vector<std::int64_t> k(shape.size());
    for (auto& v : k) v = r.k_min + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(r.count)));
    const SymbolTensor s(shape, std::move(k));
    const NucleotideSequence seq = encode(s, cb);
    if (!(decode_strict(seq, cb, shape) == s) || !(decode_robust(seq, cb, shape) == s)) {
      return {false, fmt("tensor %d (q=%g n=%zu) did not round-trip", t, q, cfg.codeword_length)};
    }
  }
  return {true, "100/100 tensors exact under strict and robust decode"};
}

Outcome codebook_oracle() {
  std::size_t configs = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto strings = all_strings(n);
    for (std::size_t max_run = 1; max_run <= 3; ++max_run) {
      std::vector<std::string> expected;
      for (const auto& s : strings) {
        std::vector<int> w;
        for (char c : s) w.push_back(static_cast<int>(std::string("ACGT").find(c)));
        if (brute_valid(w, max_run)) expected.push_back(s);
      }
      CodebookConfig cfg;
      cfg.codeword_length = n;
      cfg.max_run = max_run;
      const Codebook cb = generate(cfg);
      const std::vector<std::string> got(cb.words().begin(), cb.words().end());
      if (got != expected || capacity(cfg) != expected.size()) {
        return {false, fmt("mismatch at n=%zu max_run=%zu (got %zu, expected %zu)", n, max_run,
                           got.size(), expected.size())};
      }
      ++configs;
    }
  }
  CodebookConfig a, b;
  a.codeword_length = 3;
  b.codeword_length = 4;
  const std::size_t sa = generate(a).size(), sb = generate(b).size();
  if (sa != 60 || sb != 228) return {false, fmt("spot values %zu and %zu, expected 60 and 228", sa, sb)};
  return {true, fmt("%zu configurations match brute force; n=3 -> 60, n=4 -> 228", configs)};
}

Outcome nearest_codeword_oracle() {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    CodebookConfig cfg;
    cfg.codeword_length = n;
    const Codebook all = generate(cfg);
    // Both a fully bound codebook and one binding only a prefix of the words.
    std::vector<std::size_t> bind_counts{all.size()};
    if (all.size() > 3) bind_counts.push_back(all.size() / 2 + 1);
    for (std::size_t count : bind_counts) {
      const std::int64_t k_min = -static_cast<std::int64_t>(count / 2);
      const Codebook cb = bind_symbols(all, k_min, k_min + static_cast<std::int64_t>(count) - 1);
      for (const auto& gram : all_strings(n)) {
        std::size_t best = 0;
        int best_d = 1 << 30;
        for (std::size_t i = 0; i < count; ++i) {
          const std::string& w = all.words()[i];
          int d = 0;
          for (std::size_t j = 0; j < n; ++j) d += gram[j] != w[j];
          if (d < best_d) best_d = d, best = i;
        }
        const SymbolTensor s = decode_robust(NucleotideSequence{gram, 1, n}, cb, Shape{1, 1, 1});
        if (s.symbols[0] != k_min + static_cast<std::int64_t>(best)) {
          return {false, fmt("n=%zu '%s' decoded to %lld, expected %lld", n, gram.c_str(),
                             static_cast<long long>(s.symbols[0]),
                             static_cast<long long>(k_min + static_cast<std::int64_t>(best)))};
        }
        ++checked;
      }
    }
  }
  return {true, fmt("%zu n-grams agree with argmin-Hamming, lowest-index ties", checked)};
}

Outcome channel_statistics() {
  constexpr std::size_t kBases = 1000000;
  const double p = 0.05, band = 3.0 * std::sqrt(p * (1 - p) / kBases);
  Rng src(99);
  NucleotideSequence seq;
  seq.bases.resize(kBases);
  for (char& c : seq.bases) c = "ACGT"[src.below(4)];
  int within = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const NucleotideSequence out = substitute(seq, SubstitutionChannel{p, seed, std::nullopt});
    const double frac = hamming(seq.bases, out.bases) / static_cast<double>(kBases);
    worst = std::max(worst, std::abs(frac - p));
    if (std::abs(frac - p) <= band) ++within;
  }
  return {within >= 28, fmt("%d/30 seeds within %.2e of 0.05 (worst deviation %.2e)", within, band, worst)};
}

Outcome quantizer_properties() {
  constexpr std::size_t kPoints = 1000000;
  std::size_t violations = 0;
  const double steps[] = {1.0, 0.5, 0.4, 0.25, 0.1, 0.03, 0.01};
  Rng rng(7);
  for (double q : steps) {
    const QuantizerConfig cfg{q, 1.0};
    const SymbolRange range = symbol_range(cfg);
    LatentTensor z(Shape{1, 1, kPoints});
    z.values[0] = -1.0;
    z.values[1] = 1.0;
    for (std::size_t i = 2; i < kPoints; ++i) z.values[i] = 2.0 * rng.uniform01() - 1.0;
    const SymbolTensor k = quantize(z, cfg);
    const LatentTensor back = dequantize(k, cfg);
    const SymbolTensor again = quantize(back, cfg);
    for (std::size_t i = 0; i < kPoints; ++i) {
      violations += again.symbols[i] != k.symbols[i];
      violations += std::abs(back.values[i] - z.values[i]) > q / 2 + 1e-12;
      violations += !range.contains(k.symbols[i]);
    }
    std::vector<std::size_t> order(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return z.values[a] < z.values[b]; });
    for (std::size_t i = 1; i < kPoints; ++i) {
      violations += k.symbols[order[i]] < k.symbols[order[i - 1]];
    }
  }
  return {violations == 0, fmt("%zu violations over %zu steps x 10^6 points", violations, std::size(steps))};
}

Outcome convolution_oracle() {
  Rng rng(11);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto ci = static_cast<std::uint32_t>(1 + rng.below(4));
    const auto co = static_cast<std::uint32_t>(1 + rng.below(4));
    const auto kh = static_cast<std::uint32_t>(1 + rng.below(4));
    const auto kw = static_cast<std::uint32_t>(1 + rng.below(4));
    const auto s = static_cast<std::uint32_t>(1 + rng.below(3));
    const auto p = static_cast<std::uint32_t>(rng.below(3));
    const std::size_t h = kh + rng.below(8), w = kw + rng.below(8);
    FeatureMap in(ci, h, w);
    for (float& v : in.data) v = static_cast<float>(2.0 * rng.uniform01() - 1.0);
    std::vector<float> params(std::size_t{co} * ci * kh * kw + co);
    for (float& v : params) v = static_cast<float>(2.0 * rng.uniform01() - 1.0);
    const LayerSpec l = LayerSpec::conv(co, ci, kh, kw, s, p, params);
    const FeatureMap out = conv2d(in, l);
    const std::size_t oh = (h + 2 * p - kh) / s + 1, ow = (w + 2 * p - kw) / s + 1;
    if (out.height != oh || out.width != ow || out.channels != co) {
      return {false, fmt("case %d: output geometry mismatch", t)};
    }
    for (std::size_t o = 0; o < co; ++o)
      for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
          double acc = params[params.size() - co + o];
          for (std::size_t i = 0; i < ci; ++i)
            for (std::size_t ky = 0; ky < kh; ++ky)
              for (std::size_t kx = 0; kx < kw; ++kx) {
                const long iy = long(y * s + ky) - long(p), ix = long(x * s + kx) - long(p);
                if (iy < 0 || ix < 0 || iy >= long(h) || ix >= long(w)) continue;
                acc += double(params[((o * ci + i) * kh + ky) * kw + kx]) *
                       double(in.at(i, std::size_t(iy), std::size_t(ix)));
              }
          worst = std::max(worst, std::abs(out.at(o, y, x) - acc) / std::max(1.0, std::abs(acc)));
        }
  }
  return {worst <= 1e-5, fmt("max relative error %.2e over 200 cases", worst)};
}

Outcome reference_fidelity() {
  auto images = testing::evaluation_images();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    images.push_back({"random" + std::to_string(seed), testing::random_image(48, 32, 1 + 2 * (seed % 2), seed)});
  }
  int worst_px = 0;
  double worst_parseval = 0.0;
  for (const auto& [name, img] : images) {
    const LatentTensor z = reference_forward(img);
    const Image back = reference_inverse(z);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      worst_px = std::max(worst_px, std::abs(int(back.pixels[i]) - int(img.pixels[i])));
    }
    double coef = 0.0, pix = 0.0;
    for (double v : z.values) coef += v * v;
    for (auto p : img.pixels) pix += (p / 127.5 - 1.0) * (p / 127.5 - 1.0);
    worst_parseval = std::max(worst_parseval, std::abs(64.0 * coef - pix) / std::max(1.0, pix));
  }
  return {worst_px <= 1 && worst_parseval <= 1e-9,
          fmt("%zu images: max pixel error %d, max Parseval deviation %.2e", images.size(), worst_px,
              worst_parseval)};
}

Outcome entropy_checks() {
  auto entropy_of = [](std::vector<std::int64_t> k) {
    const std::size_t n = k.size();
    return entropy_nt(histogram(SymbolTensor(Shape{1, 1, n}, std::move(k))));
  };
  const double e0 = entropy_of({4, 4, 4, 4, 4});
  const double e4 = entropy_of({-2, -1, 0, 1, -2, -1, 0, 1});
  const double e2 = entropy_of({0, 7, 7, 0});
  const bool ok = std::abs(e0) <= 1e-9 && std::abs(e4 - 1.0) <= 1e-9 && std::abs(e2 - 0.5) <= 1e-9;
  return {ok, fmt("single %.3g, uniform-4 %.12g, uniform-2 %.12g", e0, e4, e2)};
}

Outcome noise_curve_shape() {
  SweepSpec spec;
  spec.rates = {0.0, 0.01, 0.02, 0.05, 0.10};
  for (std::uint64_t s = 1; s <= 30; ++s) spec.seeds.push_back(s);
  spec.steps = {0.1};
  std::vector<NamedImage> images;
  for (auto& [name, img] : testing::evaluation_images()) {
    spec.images.push_back(name);
    images.push_back({name, img, ""});
  }
  CodebookConfig cfg;  // n = 3, max_run = 2
  const auto rows = run_sweep(spec, images, TransformChoice::reference(), cfg);
  const std::size_t n_rate = spec.rates.size(), n_seed = spec.seeds.size();
  bool monotone = true;
  std::string per_image;
  for (std::size_t ii = 0; ii < images.size(); ++ii) {
    double prev = INFINITY;
    for (std::size_t ri = 0; ri < n_rate; ++ri) {
      double sum = 0.0;
      for (std::size_t si = 0; si < n_seed; ++si) {
        const SweepRow& r = rows[(ii * n_rate + ri) * n_seed + si];
        if (!r.ok()) return {false, "sweep row failed: " + r.status};
        sum += r.psnr_db;
      }
      const double mean = sum / static_cast<double>(n_seed);
      monotone = monotone && mean <= prev;
      prev = mean;
    }
  }
  std::string curve;
  std::vector<double> avg;
  for (std::size_t ri = 0; ri < n_rate; ++ri) {
    avg.push_back(rows[rows.size() - n_rate + ri].psnr_db);
    curve += fmt("%s%.4g:%.2f", ri ? " " : "", spec.rates[ri], avg.back());
    if (ri > 0 && avg[ri] > avg[ri - 1]) monotone = false;
  }
  const double drop = avg[0] - avg[3];
  return {monotone && drop >= 10.0,
          fmt("mean PSNR dB [%s]; drop at 5%% = %.2f dB (need >= 10), per-image monotone: %s",
              curve.c_str(), drop, monotone ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"DNA-layer losslessness", 10, losslessness},
      {"Codebook oracle", 30, codebook_oracle},
      {"Nearest-codeword oracle", 60, nearest_codeword_oracle},
      {"Channel statistics", 0, channel_statistics},
      {"Quantizer properties", 0, quantizer_properties},
      {"Convolution oracle", 0, convolution_oracle},
      {"Reference-transform fidelity", 0, reference_fidelity},
      {"Entropy checks", 0, entropy_checks},
      {"Noise curve shape (reference transform)", 0, noise_curve_shape},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += fmt("; exceeded %.0f s limit", c.time_limit_s);
    }
    failures += !o.pass;
    std::printf("%s  %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
  }
  std::printf("SKIP  Straight-through gradient: belongs to the Python trainer\n");
  std::printf("SKIP  Cross-component parity: requires the Python trainer\n");
  std::printf("SKIP  Noise-robustness gain: requires trained toy models from the Python trainer\n");
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
