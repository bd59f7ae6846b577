#pragma once

// Synthetic scattering-matrix data: the Born point-target model, an exact
// penetrable-disc series solution, diagonal contamination (antenna
// self-influence), measurement noise, and total - incident subtraction.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smig/em_model.hpp"
#include "smig/specfun.hpp"

namespace smig {

struct Anomaly {
  Vec2 center{0.01, 0.03};                      // m
  double radius = 0.010;                        // m
  double eps_star = 55.0 * kVacuumPermittivity;  // F/m, absolute
  double sigma_star = 1.2;                      // S/m

  /// Zero contrast is rejected unless allow_zero_contrast is set.
  void validate(const MediumParams& medium, bool allow_zero_contrast = false) const;
};

enum class MatrixKind { full, zero_diagonal };
enum class Provenance { born, exact_disc, measured_subtracted, plane_wave };

std::string to_string(MatrixKind kind);
std::string to_string(Provenance provenance);

struct ScatteringMatrix {
  Eigen::MatrixXcd entries;
  MatrixKind kind = MatrixKind::full;
  Provenance provenance = Provenance::born;
  double frequency_hz = 0.0;
  // One line per generator/perturbation step, seeds included.
  std::vector<std::string> history;

  int size() const { return static_cast<int>(entries.rows()); }
  /// Throws on a non-square matrix or a nonzero diagonal under zero_diagonal.
  void validate() const;
};

/// Which denominator multiplies the conductivity contrast: the printed model
/// uses omega*sigma_b, the textbook form omega*eps_b.
enum class ContrastDenominator { conductivity, permittivity };

cplx contrast(const Anomaly& anomaly, const MediumParams& medium, ContrastDenominator variant);

ScatteringMatrix born_smatrix(const AntennaArray& array, std::span<const Anomaly> anomalies,
                              const MediumParams& medium,
                              ContrastDenominator variant = ContrastDenominator::conductivity);

/// Default cylindrical-series margin: orders up to ceil(|k| rho) + 15 before
/// the tail test starts.
inline constexpr specfun::SeriesTruncation kDiscSeriesDefault{15, 1e-10};

ScatteringMatrix exact_disc_smatrix(const AntennaArray& array, const Anomaly& anomaly,
                                    const MediumParams& medium,
                                    const specfun::SeriesTruncation& trunc = kDiscSeriesDefault,
                                    ContrastDenominator variant = ContrastDenominator::conductivity);

enum class ContaminationMode { constant, random };

ScatteringMatrix contaminate_diagonal(const ScatteringMatrix& s, double amplitude_rel,
                                      ContaminationMode mode, std::uint64_t seed);

/// snr_db = +infinity returns the input unchanged.
ScatteringMatrix add_noise(const ScatteringMatrix& s, double snr_db, std::uint64_t seed);

ScatteringMatrix subtract(const ScatteringMatrix& total, const ScatteringMatrix& incident);

/// 10 log10(sum |S|^2 / sum |S' - S|^2) over stored entries.
double sample_snr_db(const ScatteringMatrix& clean, const ScatteringMatrix& noisy);

}  // namespace smig
