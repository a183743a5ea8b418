#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dnastore/bytes.hpp"
#include "dnastore/codebook.hpp"
#include "dnastore/codec.hpp"
#include "dnastore/error.hpp"
#include "dnastore/quantizer.hpp"

namespace dnastore {

enum class TransformKind : std::uint8_t { reference = 0, weights = 1 };

inline constexpr std::uint32_t kContainerVersion = 1;

struct ContainerHeader {
  std::uint32_t version = kContainerVersion;
  // True image geometry; the latent may cover a padded image.
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 0;
  Shape latent;
  double q = 0.0;
  CodebookConfig codebook;
  std::int64_t symbol_offset = 0;
  TransformKind transform = TransformKind::reference;
  std::uint64_t weights_checksum = 0;
  // Most recent substitution channel the payload went through.
  bool channel_applied = false;
  double channel_rate = 0.0;
  std::uint64_t channel_seed = 0;

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

struct DnaContainer {
  ContainerHeader header;
  NucleotideSequence payload;

  friend bool operator==(const DnaContainer&, const DnaContainer&) = default;
};

inline void validate(const DnaContainer& c) {
  const auto& h = c.header;
  if (h.version != kContainerVersion) {
    throw FormatError("unsupported container version " + std::to_string(h.version));
  }
  if (h.width == 0 || h.height == 0 || (h.channels != 1 && h.channels != 3)) {
    throw FormatError("container carries invalid image geometry");
  }
  if (!(h.q > 0.0)) throw FormatError("container carries a non-positive quantizer step");
  try {
    h.codebook.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("container codebook: ") + e.what());
  }
  if (h.transform != TransformKind::reference && h.transform != TransformKind::weights) {
    throw FormatError("unknown transform id");
  }
  const std::size_t expected = h.latent.size() * h.codebook.codeword_length;
  if (c.payload.bases.size() != expected) {
    throw FormatError("payload holds " + std::to_string(c.payload.bases.size()) +
                      " bases, header implies " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < c.payload.bases.size(); ++i) {
    if (!is_base(c.payload.bases[i])) {
      throw FormatError("payload byte at " + std::to_string(i) + " is not a nucleotide");
    }
  }
}

// Binary layout (little-endian):
//   "DNAC"  u32 header_length  header[header_length]
//   u64 payload_length  payload as ASCII A/C/G/T
//   u64 FNV-1a of every preceding byte
// header:
//   u32 version  u32 width  u32 height  u32 channels
//   u32 latent_channels  u32 latent_height  u32 latent_width
//   f64 q  u32 n  u32 max_run  u8 flags (1 boundary_safe, 2 gc_min, 4 gc_max)
//   f64 gc_min  f64 gc_max  i64 symbol_offset
//   u8 transform (0 reference, 1 weights)  u64 weights_checksum
//   u8 channel_applied  f64 channel_rate  u64 channel_seed

inline std::vector<std::uint8_t> serialize_container(const DnaContainer& c) {
  validate(c);
  const auto& h = c.header;
  ByteWriter hdr;
  hdr.u32(h.version);
  hdr.u32(h.width);
  hdr.u32(h.height);
  hdr.u32(h.channels);
  hdr.u32(static_cast<std::uint32_t>(h.latent.channels));
  hdr.u32(static_cast<std::uint32_t>(h.latent.height));
  hdr.u32(static_cast<std::uint32_t>(h.latent.width));
  hdr.f64(h.q);
  hdr.u32(static_cast<std::uint32_t>(h.codebook.codeword_length));
  hdr.u32(static_cast<std::uint32_t>(h.codebook.max_run));
  hdr.u8(static_cast<std::uint8_t>((h.codebook.boundary_safe ? 1 : 0) |
                                   (h.codebook.gc_min ? 2 : 0) | (h.codebook.gc_max ? 4 : 0)));
  hdr.f64(h.codebook.gc_min.value_or(0.0));
  hdr.f64(h.codebook.gc_max.value_or(0.0));
  hdr.i64(h.symbol_offset);
  hdr.u8(static_cast<std::uint8_t>(h.transform));
  hdr.u64(h.weights_checksum);
  hdr.u8(h.channel_applied ? 1 : 0);
  hdr.f64(h.channel_rate);
  hdr.u64(h.channel_seed);

  ByteWriter out;
  out.raw("DNAC");
  out.u32(static_cast<std::uint32_t>(hdr.size()));
  out.raw(hdr.bytes());
  out.u64(c.payload.bases.size());
  out.raw(c.payload.bases);
  out.seal();
  return std::move(out.bytes());
}

inline DnaContainer parse_container(std::span<const std::uint8_t> bytes) {
  const auto body = check_sealed(bytes, "container");
  ByteReader r(body, "container");
  const auto magic = r.raw(4);
  if (std::string(magic.begin(), magic.end()) != "DNAC") r.fail("bad magic");
  const std::uint32_t header_length = r.u32();
  ByteReader h(r.raw(header_length), "container header");
  DnaContainer c;
  auto& hd = c.header;
  hd.version = h.u32();
  if (hd.version != kContainerVersion) h.fail("unsupported version " + std::to_string(hd.version));
  hd.width = h.u32();
  hd.height = h.u32();
  hd.channels = h.u32();
  hd.latent.channels = h.u32();
  hd.latent.height = h.u32();
  hd.latent.width = h.u32();
  hd.q = h.f64();
  hd.codebook.codeword_length = h.u32();
  hd.codebook.max_run = h.u32();
  const std::uint8_t flags = h.u8();
  const double gc_min = h.f64();
  const double gc_max = h.f64();
  hd.codebook.boundary_safe = (flags & 1) != 0;
  if (flags & 2) hd.codebook.gc_min = gc_min;
  if (flags & 4) hd.codebook.gc_max = gc_max;
  hd.symbol_offset = h.i64();
  const std::uint8_t transform = h.u8();
  if (transform > 1) h.fail("unknown transform id " + std::to_string(transform));
  hd.transform = static_cast<TransformKind>(transform);
  hd.weights_checksum = h.u64();
  hd.channel_applied = h.u8() != 0;
  hd.channel_rate = h.f64();
  hd.channel_seed = h.u64();
  if (h.remaining() != 0) h.fail("unexpected trailing header bytes");

  const std::uint64_t payload_length = r.u64();
  if (payload_length != r.remaining()) r.fail("payload length does not match file size");
  const auto payload = r.raw(static_cast<std::size_t>(payload_length));
  c.payload.bases.assign(payload.begin(), payload.end());
  c.payload.codeword_length = hd.codebook.codeword_length;
  c.payload.symbol_count = hd.latent.size();
  validate(c);
  return c;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, const std::string& key) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("FASTA header field '" + key + "' has malformed value '" + std::string(s) +
                      "'");
  }
  return v;
}

}  // namespace detail

/// FASTA-like text export: one '>' header line of key=value fields, then the payload
/// wrapped every 80 bases.
inline std::string to_fasta(const DnaContainer& c) {
  validate(c);
  const auto& h = c.header;
  using detail::format_double;
  std::ostringstream os;
  os << ">dnastore version=" << h.version << " width=" << h.width << " height=" << h.height
     << " channels=" << h.channels << " latent=" << h.latent.channels << 'x' << h.latent.height
     << 'x' << h.latent.width << " q=" << format_double(h.q)
     << " n=" << h.codebook.codeword_length << " max_run=" << h.codebook.max_run
     << " boundary_safe=" << (h.codebook.boundary_safe ? 1 : 0);
  if (h.codebook.gc_min) os << " gc_min=" << format_double(*h.codebook.gc_min);
  if (h.codebook.gc_max) os << " gc_max=" << format_double(*h.codebook.gc_max);
  os << " symbol_offset=" << h.symbol_offset
     << " transform=" << (h.transform == TransformKind::reference ? "reference" : "weights")
     << " weights_checksum=" << h.weights_checksum;
  if (h.channel_applied) {
    os << " channel_rate=" << format_double(h.channel_rate) << " channel_seed=" << h.channel_seed;
  }
  os << '\n';
  const std::string& b = c.payload.bases;
  for (std::size_t i = 0; i < b.size(); i += 80) os << b.substr(i, 80) << '\n';
  return os.str();
}

inline DnaContainer parse_fasta(std::string_view text) {
  if (text.empty() || text.front() != '>') throw FormatError("FASTA text must start with '>'");
  const std::size_t eol = text.find('\n');
  const std::string_view header_line = text.substr(1, eol == std::string_view::npos ? text.npos : eol - 1);
  std::map<std::string, std::string> fields;
  std::istringstream is{std::string(header_line)};
  std::string token;
  is >> token;
  if (token != "dnastore") throw FormatError("FASTA header is not a dnastore record");
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw FormatError("FASTA header token '" + token + "' lacks '='");
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto field = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw FormatError("FASTA header is missing '" + key + "'");
    return it->second;
  };
  using detail::parse_number;
  DnaContainer c;
  auto& h = c.header;
  h.version = parse_number<std::uint32_t>(field("version"), "version");
  h.width = parse_number<std::uint32_t>(field("width"), "width");
  h.height = parse_number<std::uint32_t>(field("height"), "height");
  h.channels = parse_number<std::uint32_t>(field("channels"), "channels");
  {
    const std::string& lat = field("latent");
    const auto x1 = lat.find('x'), x2 = lat.rfind('x');
    if (x1 == std::string::npos || x1 == x2) throw FormatError("malformed latent shape '" + lat + "'");
    const std::string_view sv = lat;
    h.latent.channels = parse_number<std::size_t>(sv.substr(0, x1), "latent");
    h.latent.height = parse_number<std::size_t>(sv.substr(x1 + 1, x2 - x1 - 1), "latent");
    h.latent.width = parse_number<std::size_t>(sv.substr(x2 + 1), "latent");
  }
  h.q = parse_number<double>(field("q"), "q");
  h.codebook.codeword_length = parse_number<std::size_t>(field("n"), "n");
  h.codebook.max_run = parse_number<std::size_t>(field("max_run"), "max_run");
  h.codebook.boundary_safe = parse_number<int>(field("boundary_safe"), "boundary_safe") != 0;
  if (fields.count("gc_min")) h.codebook.gc_min = parse_number<double>(fields["gc_min"], "gc_min");
  if (fields.count("gc_max")) h.codebook.gc_max = parse_number<double>(fields["gc_max"], "gc_max");
  h.symbol_offset = parse_number<std::int64_t>(field("symbol_offset"), "symbol_offset");
  const std::string& transform = field("transform");
  if (transform == "reference") {
    h.transform = TransformKind::reference;
  } else if (transform == "weights") {
    h.transform = TransformKind::weights;
  } else {
    throw FormatError("unknown transform '" + transform + "'");
  }
  h.weights_checksum = parse_number<std::uint64_t>(field("weights_checksum"), "weights_checksum");
  if (fields.count("channel_rate")) {
    h.channel_applied = true;
    h.channel_rate = parse_number<double>(fields["channel_rate"], "channel_rate");
    h.channel_seed = parse_number<std::uint64_t>(field("channel_seed"), "channel_seed");
  }
  if (eol != std::string_view::npos) {
    for (char ch : text.substr(eol + 1)) {
      if (ch == '\n' || ch == '\r') continue;
      c.payload.bases.push_back(ch);
    }
  }
  c.payload.codeword_length = h.codebook.codeword_length;
  c.payload.symbol_count = h.latent.size();
  validate(c);
  return c;
}

/// Reads either representation, chosen by the first byte.
inline DnaContainer load_container(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  if (!bytes.empty() && bytes.front() == '>') {
    return parse_fasta(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  return parse_container(bytes);
}

inline void save_container(const std::string& path, const DnaContainer& c, bool fasta = false) {
  if (fasta) {
    const std::string text = to_fasta(c);
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  } else {
    write_file_bytes(path, serialize_container(c));
  }
}

}  // namespace dnastore
