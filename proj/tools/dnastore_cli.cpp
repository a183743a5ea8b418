// Command-line front end: encode / channel / decode / roundtrip / sweep / codebook-gen / info.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dnastore/dnastore.hpp"

namespace {

using namespace dnastore;

constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitCapacity = 4;

struct CodebookFlags {
  std::size_t n = 3;
  std::size_t max_run = 2;
  std::optional<double> gc_min;
  std::optional<double> gc_max;
  bool boundary_safe = false;

  void add_to(CLI::App* app) {
    app->add_option("--n", n, "Codeword length in nucleotides")->capture_default_str();
    app->add_option("--max-run", max_run, "Longest permitted homopolymer run")
        ->capture_default_str();
    app->add_option("--gc-min", gc_min, "Minimum GC fraction per codeword");
    app->add_option("--gc-max", gc_max, "Maximum GC fraction per codeword");
    app->add_flag("--boundary-safe", boundary_safe,
                  "Restrict edge runs so concatenated codewords respect --max-run");
  }

  CodebookConfig config() const {
    CodebookConfig cfg;
    cfg.codeword_length = n;
    cfg.max_run = max_run;
    cfg.gc_min = gc_min;
    cfg.gc_max = gc_max;
    cfg.boundary_safe = boundary_safe;
    cfg.validate();
    return cfg;
  }
};

SweepRow report_row(const std::string& image, const TransformChoice& transform,
                    const DnaContainer& c, const SymbolTensor& symbols,
                    const std::optional<Image>& original, const Image& decoded) {
  SweepRow row;
  row.image = image;
  row.transform = transform.label;
  row.q = c.header.q;
  row.n = c.header.codebook.codeword_length;
  row.rate = c.header.channel_applied ? c.header.channel_rate : 0.0;
  if (c.header.channel_applied) row.seed = c.header.channel_seed;
  row.entropy_nt_per_component = entropy_nt(histogram(symbols));
  row.nt_per_pixel = static_cast<double>(c.payload.bases.size()) /
                     static_cast<double>(std::size_t{c.header.width} * c.header.height);
  if (original) row.psnr_db = psnr(*original, decoded);
  return row;
}

void emit_row(const SweepRow& row, const std::string& csv_path) {
  std::cout << to_csv_row(row) << '\n';
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw FormatError("cannot write '" + csv_path + "'");
    write_sweep_csv(f, {row});
  }
}

void print_info(const DnaContainer& c) {
  const auto& h = c.header;
  std::cout << "version: " << h.version << '\n'
            << "image: " << h.width << "x" << h.height << "x" << h.channels << '\n'
            << "latent: " << to_string(h.latent) << '\n'
            << "q: " << h.q << '\n'
            << "codeword_length: " << h.codebook.codeword_length << '\n'
            << "max_run: " << h.codebook.max_run << '\n'
            << "boundary_safe: " << (h.codebook.boundary_safe ? "yes" : "no") << '\n';
  if (h.codebook.gc_min) std::cout << "gc_min: " << *h.codebook.gc_min << '\n';
  if (h.codebook.gc_max) std::cout << "gc_max: " << *h.codebook.gc_max << '\n';
  std::cout << "symbol_offset: " << h.symbol_offset << '\n'
            << "transform: "
            << (h.transform == TransformKind::reference
                    ? std::string("reference")
                    : "weights (checksum " + std::to_string(h.weights_checksum) + ")")
            << '\n';
  if (h.channel_applied) {
    std::cout << "channel: rate " << h.channel_rate << ", seed " << h.channel_seed << '\n';
  }
  std::cout << "nucleotides: " << c.payload.bases.size() << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Image storage codec over a constrained DNA alphabet with channel simulation"};
  app.require_subcommand(1);

  std::string transform_spec = "reference";
  double q = 0.1;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::string input, output, csv_path, original_path, dump_latent;
  bool fasta = false;
  CodebookFlags cb_flags;

  auto* encode_cmd = app.add_subcommand("encode", "Transform, quantize and map an image to DNA");
  encode_cmd->add_option("image", input, "Input PGM/PPM image")->required();
  encode_cmd->add_option("-o,--output", output, "Output container")->required();
  encode_cmd->add_option("--transform", transform_spec, "reference | weights=<path>")
      ->capture_default_str();
  encode_cmd->add_option("--q", q, "Quantization step")->capture_default_str();
  cb_flags.add_to(encode_cmd);
  encode_cmd->add_flag("--fasta", fasta, "Write the FASTA-like text form");
  encode_cmd->add_option("--dump-latent", dump_latent, "Also write the raw latent as f32 dump");

  auto* channel_cmd = app.add_subcommand("channel", "Apply i.i.d. substitutions to a container");
  channel_cmd->add_option("container", input, "Input container")->required();
  channel_cmd->add_option("-o,--output", output, "Output container")->required();
  channel_cmd->add_option("--rate", rate, "Per-nucleotide substitution probability")->required();
  channel_cmd->add_option("--seed", seed, "Channel seed")->capture_default_str();
  channel_cmd->add_flag("--fasta", fasta, "Write the FASTA-like text form");

  auto* decode_cmd = app.add_subcommand("decode", "Robustly decode a container to an image");
  decode_cmd->add_option("container", input, "Input container")->required();
  decode_cmd->add_option("-o,--output", output, "Output PGM/PPM image")->required();
  decode_cmd->add_option("--transform", transform_spec, "reference | weights=<path>")
      ->capture_default_str();
  decode_cmd->add_option("--original", original_path, "Original image for PSNR");
  decode_cmd->add_option("--csv", csv_path, "Also write the report as CSV");

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "encode + channel + decode");
  roundtrip_cmd->add_option("image", input, "Input PGM/PPM image")->required();
  roundtrip_cmd->add_option("-o,--output", output, "Output PGM/PPM image")->required();
  roundtrip_cmd->add_option("--transform", transform_spec, "reference | weights=<path>")
      ->capture_default_str();
  roundtrip_cmd->add_option("--q", q, "Quantization step")->capture_default_str();
  cb_flags.add_to(roundtrip_cmd);
  roundtrip_cmd->add_option("--rate", rate, "Substitution probability")->capture_default_str();
  roundtrip_cmd->add_option("--seed", seed, "Channel seed")->capture_default_str();
  roundtrip_cmd->add_option("--csv", csv_path, "Also write the report as CSV");

  SweepSpec sweep;
  unsigned threads = default_threads();
  auto* sweep_cmd = app.add_subcommand("sweep", "PSNR over images x q x rates x seeds");
  sweep_cmd->add_option("--images", sweep.images, "PGM/PPM images")->required();
  sweep_cmd->add_option("--q", sweep.steps, "Quantization steps")->required();
  sweep_cmd->add_option("--rates", sweep.rates, "Substitution rates")->required();
  sweep_cmd->add_option("--seeds", sweep.seeds, "Channel seeds")->required();
  sweep_cmd->add_option("--transform", transform_spec, "reference | weights=<path>")
      ->capture_default_str();
  cb_flags.add_to(sweep_cmd);
  sweep_cmd->add_option("--csv", csv_path, "Output CSV")->required();
  sweep_cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();

  auto* codebook_cmd = app.add_subcommand("codebook-gen", "Dump the constrained codebook");
  cb_flags.add_to(codebook_cmd);
  codebook_cmd->add_option("-o,--output", output, "Output text file (default stdout)");

  auto* info_cmd = app.add_subcommand("info", "Print a container header");
  info_cmd->add_option("container", input, "Input container")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*encode_cmd) {
    const TransformChoice transform = TransformChoice::parse(transform_spec);
    const Image img = read_pnm(input);
    const EncodeOutput out = encode_to_container(img, transform, {q, cb_flags.config()});
    save_container(output, out.container, fasta);
    if (!dump_latent.empty()) {
      write_file_bytes(dump_latent,
                       serialize_latent_dump(transform.forward(pad_symmetric(img, transform.divisibility()))));
    }
  } else if (*channel_cmd) {
    const DnaContainer c = load_container(input);
    save_container(output, apply_channel(c, rate, seed), fasta);
  } else if (*decode_cmd) {
    const TransformChoice transform = TransformChoice::parse(transform_spec);
    const DnaContainer c = load_container(input);
    const DecodeOutput dec = decode_container(c, transform);
    write_pnm(output, dec.image);
    std::optional<Image> original;
    if (!original_path.empty()) original = read_pnm(original_path);
    emit_row(report_row(input, transform, c, dec.symbols, original, dec.image), csv_path);
  } else if (*roundtrip_cmd) {
    const TransformChoice transform = TransformChoice::parse(transform_spec);
    const Image img = read_pnm(input);
    const EncodeOutput enc = encode_to_container(img, transform, {q, cb_flags.config()});
    const DnaContainer noisy = apply_channel(enc.container, rate, seed);
    const DecodeOutput dec = decode_container(noisy, transform);
    write_pnm(output, dec.image);
    emit_row(report_row(input, transform, noisy, enc.symbols, img, dec.image), csv_path);
  } else if (*sweep_cmd) {
    const TransformChoice transform = TransformChoice::parse(transform_spec);
    const auto rows = run_sweep(sweep, transform, cb_flags.config(), threads);
    std::ofstream f(csv_path);
    if (!f) throw FormatError("cannot write '" + csv_path + "'");
    write_sweep_csv(f, rows);
  } else if (*codebook_cmd) {
    const Codebook cb = generate(cb_flags.config());
    if (output.empty()) {
      write_codebook(std::cout, cb);
    } else {
      std::ofstream f(output);
      if (!f) throw FormatError("cannot write '" + output + "'");
      write_codebook(f, cb);
    }
  } else if (*info_cmd) {
    print_info(load_container(input));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dnastore::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.category()) {
      case dnastore::Error::Category::capacity: return kExitCapacity;
      case dnastore::Error::Category::format: return kExitFormat;
      case dnastore::Error::Category::configuration: return kExitConfig;
    }
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
