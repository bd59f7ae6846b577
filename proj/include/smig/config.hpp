#pragma once

// Run configuration: flat "section.key = value" text, '#' comments.
// Every key has a default taken from the small-anomaly reference scenario.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smig/em_model.hpp"
#include "smig/forward.hpp"
#include "smig/imaging.hpp"

namespace smig {

struct AnomalyConfig {
  double center_x = 0.01;  // m
  double center_y = 0.03;  // m
  double radius = 0.010;   // m
  double eps_rel = 55.0;
  double sigma = 1.2;  // S/m

  bool operator==(const AnomalyConfig&) const = default;
};

enum class Generator { born, exact_disc };
enum class OutputFormat { csv, pgm, both };

struct RunConfig {
  // scenario only picks the defaults of anomaly 1: small | extended
  std::string scenario = "small";

  double eps_rel = 20.0;
  double sigma = 0.2;  // S/m
  double frequency_hz = 1.0e9;

  int antennas = 16;
  double array_radius = 0.09;  // m

  std::vector<AnomalyConfig> anomalies{AnomalyConfig{}};

  ImagingGrid grid{};

  MatrixKind kind = MatrixKind::zero_diagonal;
  RankPolicy rank{};
  ContrastDenominator contrast = ContrastDenominator::conductivity;
  bool lossless_k = false;
  SteeringModel steering = SteeringModel::hankel;

  Generator generator = Generator::born;
  int series_margin = 15;
  double series_tol = 1e-10;
  double contamination = 0.0;  // relative amplitude
  ContaminationMode contamination_mode = ContaminationMode::constant;
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  int structure_s_max = 64;
  int structure_lattice = 21;

  std::string out_dir = ".";
  std::string out_prefix = "smig";
  OutputFormat format = OutputFormat::csv;

  bool operator==(const RunConfig&) const = default;
};

AnomalyConfig scenario_anomaly(std::string_view scenario);

/// Overrides are "key=value" strings applied on top of the text; they may
/// repeat keys from the text but not each other.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

std::string serialize(const RunConfig& config);

/// FNV-1a 64 of serialize(config).
std::uint64_t config_hash(const RunConfig& config);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

MediumParams medium_of(const RunConfig& config);
AntennaArray array_of(const RunConfig& config);
std::vector<Anomaly> anomalies_of(const RunConfig& config);
/// Wavenumber used by test vectors: the medium's complex k, or the lossless
/// real k when lossless_k is set.
ComplexWavenumber steering_k(const RunConfig& config);

}  // namespace smig
