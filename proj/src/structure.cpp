#include "smig/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smig/error.hpp"
#include "smig/imaging.hpp"

namespace smig {

namespace {

constexpr cplx kI{0.0, 1.0};

double j0(double x) { return x == 0.0 ? 1.0 : specfun::bessel_j(0, x); }

template <typename Value>
RatioReport ratio_over(std::span<const Vec2> points, const AntennaArray& array, double k_real,
                       const Vec2& r_star, const specfun::SeriesTruncation& trunc,
                       Value&& numerator) {
  StructureConfig cfg;
  cfg.trunc = trunc;
  RatioReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (const auto& r : points) {
    const double s = structure_diag(r, array, k_real, r_star, cfg);
    if (s < 1e-8) {
      ++rep.skipped;
      continue;
    }
    const double q = numerator(r) / s;
    rep.min_ratio = std::min(rep.min_ratio, q);
    rep.max_ratio = std::max(rep.max_ratio, q);
    ++rep.points;
  }
  if (rep.points == 0) throw Error(ErrorKind::data, "structure", "no usable sample points");
  rep.spread = (rep.max_ratio - rep.min_ratio) / rep.max_ratio;
  return rep;
}

}  // namespace

cplx psi1(double k_real, double theta_n, const Vec2& r, const Vec2& r_center,
          const specfun::SeriesTruncation& trunc) {
  trunc.validate();
  const Vec2 rel = r - r_center;
  const double x = k_real * rel.norm();
  if (x == 0.0) return {0.0, 0.0};
  const double alpha = theta_n - std::atan2(rel.y(), rel.x());
  const auto j = specfun::bessel_j_sequence(trunc.max_order, cplx{x, 0.0});
  // J_{-s} = (-1)^s J_s pairs +s and -s into 2 i^s J_s cos(s alpha)
  cplx sum{0.0, 0.0};
  cplx is{1.0, 0.0};
  for (int s = 1; s <= trunc.max_order; ++s) {
    is *= kI;
    sum += 2.0 * is * j[static_cast<std::size_t>(s)].real() * std::cos(s * alpha);
  }
  return sum;
}

cplx psi1_mean(double k_real, const AntennaArray& array, const Vec2& r, const Vec2& r_center,
               const specfun::SeriesTruncation& trunc) {
  cplx sum{0.0, 0.0};
  for (double theta : array.angles()) sum += psi1(k_real, theta, r, r_center, trunc);
  return sum / static_cast<double>(array.count());
}

double structure_full(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star,
                      const StructureConfig& config) {
  for (const auto& rm : config.artifact_locations)
    if ((rm - r_star).norm() == 0.0)
      throw Error(ErrorKind::config, "structure", "artifact location coincides with r_star");
  cplx base = j0(k_real * (r - r_star).norm()) + psi1_mean(k_real, array, r, r_star, config.trunc);
  for (const auto& rm : config.artifact_locations)
    base += j0(k_real * (r - rm).norm()) + psi1_mean(k_real, array, r, rm, config.trunc);
  return std::abs(base * base);
}

double structure_diag(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star,
                      const StructureConfig& config) {
  const double n = array.count();
  const double dist = (r - r_star).norm();
  const cplx a = j0(k_real * dist) + psi1_mean(k_real, array, r, r_star, config.trunc);
  const cplx b = j0(2.0 * k_real * dist) + psi1_mean(2.0 * k_real, array, r, r_star, config.trunc);
  return n / (n - 1.0) * std::abs(a * a - b / n);
}

bool within_validity_margin(const Vec2& r, const AntennaArray& array, double k_real,
                            const Vec2& r_star) {
  const double margin = 10.0 * 0.25 / k_real;
  for (const auto& d : array.positions())
    if ((d - r).norm() < margin || (d - r_star).norm() < margin) return false;
  return true;
}

ScatteringMatrix ideal_plane_wave_matrix(const AntennaArray& array, double k_real,
                                         const Vec2& r_star, MatrixKind kind) {
  const int n = array.count();
  Eigen::VectorXcd e(n);
  for (int i = 0; i < n; ++i) e(i) = std::exp(cplx{0.0, -k_real * array.direction(i).dot(r_star)});
  ScatteringMatrix out;
  out.entries = (e * e.transpose()) / static_cast<double>(n);
  if (kind == MatrixKind::zero_diagonal) out.entries.diagonal().setZero();
  out.kind = kind;
  out.provenance = Provenance::plane_wave;
  out.frequency_hz = 0.0;
  out.history.push_back("ideal_plane_wave_matrix");
  return out;
}

double diag_double_sum(const Vec2& r, const AntennaArray& array, double k_real, const Vec2& r_star) {
  const int n = array.count();
  std::vector<cplx> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    a[static_cast<std::size_t>(i)] = std::exp(cplx{0.0, k_real * array.direction(i).dot(r - r_star)});
  cplx sum{0.0, 0.0};
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      if (m != i) sum += a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(i)];
  return std::abs(sum / static_cast<double>(n)) / (n - 1.0);
}

DiagIdentityReport validate_diag_identity(std::span<const Vec2> points, const AntennaArray& array,
                                          double k_real, const Vec2& r_star,
                                          const specfun::SeriesTruncation& trunc) {
  StructureConfig cfg;
  cfg.trunc = trunc;
  DiagIdentityReport rep;
  for (const auto& r : points) {
    if (!within_validity_margin(r, array, k_real, r_star)) ++rep.below_margin;
    const double dev =
        std::abs(diag_double_sum(r, array, k_real, r_star) - structure_diag(r, array, k_real, r_star, cfg));
    if (dev > rep.max_abs_deviation || rep.points == 0) {
      rep.max_abs_deviation = dev;
      rep.worst_point = r;
    }
    ++rep.points;
  }
  return rep;
}

RatioReport image_structure_ratio(std::span<const Vec2> points, const AntennaArray& array,
                                  double k_real, const Vec2& r_star,
                                  const specfun::SeriesTruncation& trunc) {
  const auto d = ideal_plane_wave_matrix(array, k_real, r_star, MatrixKind::zero_diagonal);
  const SubspaceImager imager(svd(d), 1, array, ComplexWavenumber{k_real}, SteeringModel::plane_wave);
  return ratio_over(points, array, k_real, r_star, trunc,
                    [&](const Vec2& r) { return imager.value(r); });
}

RatioReport bilinear_structure_ratio(std::span<const Vec2> points, const AntennaArray& array,
                                     double k_real, const Vec2& r_star,
                                     const specfun::SeriesTruncation& trunc) {
  const auto d = ideal_plane_wave_matrix(array, k_real, r_star, MatrixKind::zero_diagonal);
  return ratio_over(points, array, k_real, r_star, trunc, [&](const Vec2& r) {
    const Eigen::VectorXcd w =
        test_vector(r, array, ComplexWavenumber{k_real}, SteeringModel::plane_wave);
    return std::abs(w.dot(d.entries * w.conjugate()));
  });
}

std::vector<Vec2> lattice_points(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw Error(ErrorKind::config, "structure", "lattice needs n >= 2, hi > lo");
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      pts.emplace_back(lo + (hi - lo) * ix / (n - 1), lo + (hi - lo) * iy / (n - 1));
  return pts;
}

}  // namespace smig
