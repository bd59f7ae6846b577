#pragma once

// Subspace-migration imaging: SVD, rank selection, test vectors, and the
// full-matrix / zero-diagonal imaging functions on a rectangular grid.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "smig/em_model.hpp"
#include "smig/forward.hpp"

namespace smig {

struct SvdResult {
  Eigen::VectorXd tau;  // descending
  Eigen::MatrixXcd u;   // left singular vectors as columns
  Eigen::MatrixXcd v;   // right singular vectors; S = U diag(tau) V^H
};

SvdResult svd(const ScatteringMatrix& s);

struct RankPolicy {
  enum class Mode { relative_threshold, fixed };
  Mode mode = Mode::relative_threshold;
  double threshold = 0.02;
  int fixed_m = 1;

  static RankPolicy fixed(int m) { return {Mode::fixed, 0.02, m}; }
  void validate(int n) const;
  bool operator==(const RankPolicy&) const = default;
};

int select_rank(const SvdResult& svd, const RankPolicy& policy);

struct ImagingGrid {
  double x_min = -0.1;
  double x_max = 0.1;
  double y_min = -0.1;
  double y_max = 0.1;
  double step = 0.001;

  void validate() const;
  int nx() const;
  int ny() const;
  double x(int ix) const { return x_min + ix * step; }
  double y(int iy) const { return y_min + iy * step; }
  bool operator==(const ImagingGrid&) const = default;
};

/// Grid points closer than this to an antenna are skipped (stored as 0).
inline constexpr double kAntennaExclusion = 1e-9;

struct ImageMap {
  ImagingGrid grid;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major: index iy * nx + ix
  int rank = 0;
  double frequency_hz = 0.0;
  MatrixKind kind = MatrixKind::full;
  int excluded_points = 0;

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  Vec2 point(int ix, int iy) const { return {grid.x(ix), grid.y(iy)}; }
};

/// hankel: W_n = E_inc(d_n, r). plane_wave: W_n = exp(-i Re(k) theta_n . r), the
/// far-field form the closed-form analysis is built on.
enum class SteeringModel { hankel, plane_wave };

/// Unit-norm W(r) / |W(r)|.
Eigen::VectorXcd test_vector(const Vec2& r, const AntennaArray& array, const ComplexWavenumber& k,
                             SteeringModel model = SteeringModel::hankel);

ScatteringMatrix zero_diagonal(const ScatteringMatrix& s);

/// |sum_{m<=M} <W, U_m> <W, conj V_m>| at single points.
class SubspaceImager {
 public:
  SubspaceImager(const SvdResult& svd, int rank, const AntennaArray& array,
                 const ComplexWavenumber& k, SteeringModel model);

  double value(const Vec2& r) const;
  int rank() const { return rank_; }

 private:
  Eigen::MatrixXcd u_;
  Eigen::MatrixXcd v_conj_;
  int rank_;
  const AntennaArray* array_;
  ComplexWavenumber k_;
  SteeringModel model_;
};

ImageMap image_full(const ScatteringMatrix& s, const ImagingGrid& grid, const AntennaArray& array,
                    const ComplexWavenumber& k, const RankPolicy& policy,
                    SteeringModel model = SteeringModel::hankel);

ImageMap image_diag(const ScatteringMatrix& s, const ImagingGrid& grid, const AntennaArray& array,
                    const ComplexWavenumber& k, SteeringModel model = SteeringModel::hankel);

struct Peak {
  Vec2 location;
  double value = 0.0;
  int ix = 0;
  int iy = 0;
};

/// First maximum in row-major order.
Peak argmax(const ImageMap& map);

struct Fwhm {
  double width = 0.0;  // mean of the x and y widths
  double width_x = 0.0;
  double width_y = 0.0;
  bool touches_boundary = false;
};

/// Half-max crossings found by walking outward from the peak along x and y,
/// linearly interpolated between samples.
Fwhm fwhm(const ImageMap& map, const Peak& peak);

}  // namespace smig
