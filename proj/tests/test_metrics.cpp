#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>

#include "dnastore/metrics.hpp"
#include "dnastore/random.hpp"

namespace dnastore {
namespace {

SymbolTensor flat(std::vector<std::int64_t> k) {
  const std::size_t n = k.size();
  return SymbolTensor(Shape{1, 1, n}, std::move(k));
}

TEST(Histogram, CountsPooledSymbols) {
  const SymbolHistogram h = histogram(flat({0, 0, 1}));
  EXPECT_EQ(h.total, 3u);
  EXPECT_EQ(h.counts.size(), 2u);
  EXPECT_EQ(h.counts.at(0), 2u);
  EXPECT_EQ(h.counts.at(1), 1u);
  EXPECT_EQ(histogram(flat({5, 5, 5, 5})).counts.size(), 1u);
  EXPECT_THROW(histogram(SymbolTensor{}), DomainError);
}

TEST(Histogram, UniformDrawsGiveNearEqualBins) {
  Rng rng(1);
  std::vector<std::int64_t> k(1000000);
  for (auto& v : k) v = static_cast<std::int64_t>(rng.below(4)) - 1;
  const SymbolHistogram h = histogram(flat(std::move(k)));
  ASSERT_EQ(h.counts.size(), 4u);
  for (const auto& [sym, count] : h.counts) EXPECT_NEAR(count / 1e6, 0.25, 0.002) << sym;
}

TEST(Entropy, ClosedFormCases) {
  EXPECT_NEAR(entropy_nt(histogram(flat({3, 3, 3}))), 0.0, 1e-12);
  EXPECT_NEAR(entropy_nt(histogram(flat({-1, 0, 1, 2}))), 1.0, 1e-12);
  EXPECT_NEAR(entropy_nt(histogram(flat({0, 1, 0, 1}))), 0.5, 1e-12);
  EXPECT_THROW(entropy_nt(SymbolHistogram{}), DomainError);
}

TEST(Entropy, MatchesHighPrecisionEvaluation) {
  using big = boost::multiprecision::cpp_dec_float_50;
  Rng rng(2);
  std::vector<std::int64_t> k(5000);
  for (auto& v : k) v = static_cast<std::int64_t>(rng.below(7) * rng.below(3));
  const SymbolHistogram h = histogram(flat(k));
  big e = 0;
  for (const auto& [sym, count] : h.counts) {
    const big p = big(count) / big(h.total);
    e -= p * log(p);
  }
  e /= log(big(4));
  EXPECT_NEAR(entropy_nt(h), e.convert_to<double>(), 1e-12);
}

TEST(Entropy, BoundedByOccupiedBinsAndLabelInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> k(200 + rng.below(500));
    const std::uint64_t bins = 1 + rng.below(30);
    for (auto& v : k) v = static_cast<std::int64_t>(rng.below(bins));
    const SymbolHistogram h = histogram(flat(k));
    const double e = entropy_nt(h);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, std::log(double(h.counts.size())) / std::log(4.0) + 1e-12);
    std::vector<std::int64_t> relabeled = k;
    for (auto& v : relabeled) v = 1000 - 7 * v;
    EXPECT_NEAR(entropy_nt(histogram(flat(relabeled))), e, 1e-12);
  }
}

TEST(Entropy, FixedLengthRateDominatesEntropy) {
  // With at most 4^n bound symbols the n nucleotides per component bound the entropy.
  Rng rng(4);
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::uint64_t symbols = 1ull << (2 * n);
    std::vector<std::int64_t> k(10000);
    for (auto& v : k) v = static_cast<std::int64_t>(rng.below(symbols));
    EXPECT_LE(entropy_nt(histogram(flat(k))), double(n) + 1e-12);
  }
}

TEST(Psnr, Examples) {
  const Image a(4, 4, 1, 0), b(4, 4, 1, 255);
  EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(psnr(a, b), 0.0, 1e-12);
  Image g(2, 2, 1, 100), g2 = g;
  g2.pixels[3] = 101;
  EXPECT_NEAR(psnr(g, g2), 10.0 * std::log10(255.0 * 255.0 * 4.0), 1e-12);
  EXPECT_NEAR(psnr(g, g2), 54.15, 0.01);
  EXPECT_THROW(psnr(Image(2, 2, 1), Image(2, 3, 1)), DomainError);
  EXPECT_THROW(psnr(Image(2, 2, 1), Image(2, 2, 3)), DomainError);
}

TEST(Psnr, SymmetricAndDecreasingInError) {
  Image base(8, 8, 3, 120);
  double prev = std::numeric_limits<double>::infinity();
  for (int delta = 1; delta < 60; delta += 3) {
    Image other = base;
    for (std::size_t i = 0; i < other.pixels.size(); i += 5) other.pixels[i] += delta;
    const double p = psnr(base, other);
    EXPECT_DOUBLE_EQ(p, psnr(other, base));
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(RateReport, AggregatesRateAndDistortion) {
  NucleotideSequence seq{std::string(15, 'A'), 5, 3};
  const Image img(8, 8, 1, 10);
  const RateReport r = rate_report(seq, flat({0, 1, 0, 1, 2}), img, img);
  EXPECT_EQ(r.nucleotides_total, 15u);
  EXPECT_DOUBLE_EQ(r.nt_per_pixel, 15.0 / 64.0);
  EXPECT_EQ(r.psnr_db, std::numeric_limits<double>::infinity());
  EXPECT_NEAR(r.entropy_nt_per_component,
              -(0.4 * std::log(0.4) * 2 + 0.2 * std::log(0.2)) / std::log(4.0), 1e-12);
}

}  // namespace
}  // namespace dnastore
