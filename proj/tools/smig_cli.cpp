// smig: simulate | image | validate | spectrum
//
// Errors go to stderr as a single line
//   error kind=<kind> module=<module> message=<text>
// with exit code 2 (1 for command-line usage errors).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "smig/config.hpp"
#include "smig/error.hpp"
#include "smig/io.hpp"
#include "smig/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::string stot;
  std::string sinc;
};

smig::RunConfig load(const Options& o) {
  const std::string text = o.config_path.empty() ? std::string{} : smig::read_text(o.config_path);
  std::vector<std::string> ov = o.overrides;
  if (!o.out_dir.empty()) ov.push_back("output.dir=" + o.out_dir);
  if (!o.format.empty()) ov.push_back("output.format=" + o.format);
  if (o.seed) ov.push_back("synthesis.seed=" + std::to_string(*o.seed));
  return smig::parse_config(text, ov);
}

fs::path out_path(const smig::RunConfig& c, const std::string& suffix) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / (c.out_prefix + suffix);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_run_meta(const smig::RunConfig& c, const fs::path& path, const std::string& extra) {
  smig::write_text(path.string() + ".meta", "seed=" + std::to_string(c.seed) + "\nconfig_hash=" +
                                                hex(smig::config_hash(c)) + "\n" + extra);
}

// Measured data when --stot/--sinc are given, synthetic data otherwise.
smig::ScatteringMatrix acquire(const smig::RunConfig& c, const Options& o) {
  if (o.stot.empty() != o.sinc.empty())
    throw smig::Error(smig::ErrorKind::config, "cli", "--stot and --sinc must be given together");
  if (o.stot.empty()) return smig::synthesize(c);
  auto s = smig::subtract(smig::read_sparams(o.stot), smig::read_sparams(o.sinc));
  if (s.size() != c.antennas)
    throw smig::Error(smig::ErrorKind::shape, "cli",
                      "file has N=" + std::to_string(s.size()) + " but array.n=" +
                          std::to_string(c.antennas));
  return s;
}

int cmd_simulate(const Options& o) {
  const auto c = load(o);
  const auto s = smig::synthesize(c);
  const auto path = out_path(c, "_sparams.csv");
  smig::write_sparams(s, path);
  std::string hist;
  for (const auto& h : s.history) hist += "history=" + h + "\n";
  write_run_meta(c, path, hist);
  std::cout << "wrote " << path.string() << " N=" << s.size()
            << " f_hz=" << smig::format_double(s.frequency_hz) << "\n";
  return 0;
}

int cmd_image(const Options& o) {
  const auto c = load(o);
  const auto s = acquire(c, o);
  const auto run = smig::run_imaging(c, s);
  const std::string label = c.kind == smig::MatrixKind::zero_diagonal ? "image_diag" : "image_full";
  const smig::MapMetadata meta{c.seed, smig::config_hash(c), label};
  if (c.format != smig::OutputFormat::pgm)
    smig::write_map(run.map, out_path(c, "_" + label + ".csv"), smig::MapFormat::csv, meta);
  if (c.format != smig::OutputFormat::csv)
    smig::write_map(run.map, out_path(c, "_" + label + ".pgm"), smig::MapFormat::pgm, meta);
  std::cout << "argmax x=" << smig::format_double(run.peak.location.x())
            << " y=" << smig::format_double(run.peak.location.y())
            << " value=" << smig::format_double(run.peak.value) << " rank=" << run.map.rank
            << " fwhm=" << smig::format_double(run.width.width)
            << (run.width.touches_boundary ? " fwhm_boundary=true" : "") << "\n";
  return 0;
}

int cmd_validate(const Options& o) {
  const auto c = load(o);
  const auto v = smig::run_validation(c);
  std::cout << "max_deviation=" << smig::format_double(v.identity.max_abs_deviation)
            << " points=" << v.identity.points << " below_margin=" << v.identity.below_margin
            << " k=" << smig::format_double(v.k_real) << "\n";
  std::cout << "image_ratio min=" << smig::format_double(v.image_ratio.min_ratio)
            << " max=" << smig::format_double(v.image_ratio.max_ratio)
            << " spread=" << smig::format_double(v.image_ratio.spread)
            << " skipped=" << v.image_ratio.skipped << "\n";
  std::cout << "bilinear_ratio min=" << smig::format_double(v.bilinear_ratio.min_ratio)
            << " max=" << smig::format_double(v.bilinear_ratio.max_ratio)
            << " spread=" << smig::format_double(v.bilinear_ratio.spread) << "\n";
  return 0;
}

int cmd_spectrum(const Options& o) {
  const auto c = load(o);
  auto s = acquire(c, o);
  if (c.kind == smig::MatrixKind::zero_diagonal) s = smig::zero_diagonal(s);
  const auto dec = smig::svd(s);
  const auto path = out_path(c, "_spectrum.csv");
  smig::write_spectrum(dec, path);
  write_run_meta(c, path, "kind=" + smig::to_string(s.kind) + "\n");
  std::cout << "wrote " << path.string() << " rank=" << smig::select_rank(dec, c.rank) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace-migration microwave imaging toolkit"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool measured) {
    sub->add_option("--config", o.config_path, "key = value config file");
    sub->add_option("--override", o.overrides, "key=value, repeatable")->take_all();
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--format", o.format, "csv|pgm|both");
    sub->add_option("--seed", o.seed, "seed for contamination and noise");
    if (measured) {
      sub->add_option("--stot", o.stot, "measured total-field S-parameters");
      sub->add_option("--sinc", o.sinc, "measured incident-field S-parameters");
    }
  };
  auto* simulate = app.add_subcommand("simulate", "synthesize S-parameters");
  auto* image = app.add_subcommand("image", "compute an imaging map");
  auto* validate = app.add_subcommand("validate", "compare imaging against the closed-form structure");
  auto* spectrum = app.add_subcommand("spectrum", "write the singular-value spectrum");
  add_common(simulate, false);
  add_common(image, true);
  add_common(validate, false);
  add_common(spectrum, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    std::cerr << "error kind=usage module=cli message=" << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (image->parsed()) return cmd_image(o);
    if (validate->parsed()) return cmd_validate(o);
    if (spectrum->parsed()) return cmd_spectrum(o);
  } catch (const smig::Error& e) {
    std::cerr << "error kind=" << smig::to_string(e.kind()) << " module=" << e.module()
              << " message=" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error kind=internal module=cli message=" << e.what() << "\n";
    return 2;
  }
  return 1;
}
