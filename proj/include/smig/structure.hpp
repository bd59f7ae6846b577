#pragma once

// Closed-form Bessel-series structure of the imaging functions for ideal
// far-field data, the plane-wave matrices it is derived from, and harnesses
// that check the series against direct finite sums.

#include <span>
#include <vector>

#include "smig/em_model.hpp"
#include "smig/forward.hpp"
#include "smig/specfun.hpp"

namespace smig {

struct StructureConfig {
  specfun::SeriesTruncation trunc{};
  std::vector<Vec2> artifact_locations;  // r_m, m >= 2
  bool use_lossless_k = true;
};

/// sum_{0<|s|<=S_max} i^s J_s(k|r - rc|) e^{i s (theta_n - phi)}, phi = arg(r - rc).
cplx psi1(double k_real, double theta_n, const Vec2& r, const Vec2& r_center,
          const specfun::SeriesTruncation& trunc);

/// (1/N) sum_n psi1(k, theta_n, ...)
cplx psi1_mean(double k_real, const AntennaArray& array, const Vec2& r, const Vec2& r_center,
               const specfun::SeriesTruncation& trunc);

/// |(J0(k|r-r*|) + mean psi1 + sum_m [J0(k|r-r_m|) + mean psi1 about r_m])^2|
double structure_full(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star,
                      const StructureConfig& config);

/// (N/(N-1)) |(J0(k|r-r*|) + mean psi1(k))^2 - (1/N)(J0(2k|r-r*|) + mean psi1(2k))|
double structure_diag(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star,
                      const StructureConfig& config);

/// True when every antenna is at least 10 * 0.25/k from both r and r_star.
bool within_validity_margin(const Vec2& r, const AntennaArray& array, double k_real,
                            const Vec2& r_star);

/// (1/N) exp(-i k (theta_m + theta_n) . r_star), diagonal zeroed on request.
ScatteringMatrix ideal_plane_wave_matrix(const AntennaArray& array, double k_real,
                                         const Vec2& r_star, MatrixKind kind);

/// (1/(N-1)) |(1/N) sum_{m != n} a_m a_n|, a_n = exp(i k theta_n . (r - r_star)).
double diag_double_sum(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star);

struct DiagIdentityReport {
  double max_abs_deviation = 0.0;
  Vec2 worst_point{0.0, 0.0};
  int points = 0;
  int below_margin = 0;  // points evaluated despite failing the validity margin
};

DiagIdentityReport validate_diag_identity(std::span<const Vec2> points, const AntennaArray& array,
                                          double k_real, const Vec2& r_star,
                                          const specfun::SeriesTruncation& trunc);

struct RatioReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread = 0.0;  // (max - min) / max
  int points = 0;
  int skipped = 0;  // structure value below 1e-8, ratio undefined
};

/// Ratio of image_diag on ideal_plane_wave_matrix(zero_diagonal) (plane-wave
/// steering) to structure_diag, over the given points.
RatioReport image_structure_ratio(std::span<const Vec2> points, const AntennaArray& array,
                                  double k_real, const Vec2& r_star,
                                  const specfun::SeriesTruncation& trunc);

/// Same ratio, but with the bilinear form |W^H D conj(W)| of the whole ideal
/// zero-diagonal matrix D in place of the top singular pair.
RatioReport bilinear_structure_ratio(std::span<const Vec2> points, const AntennaArray& array,
                                     double k_real, const Vec2& r_star,
                                     const specfun::SeriesTruncation& trunc);

/// Regular sample points: an n x n lattice spanning the grid bounds.
std::vector<Vec2> lattice_points(double lo, double hi, int n);

}  // namespace smig
