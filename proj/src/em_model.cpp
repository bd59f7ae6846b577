#include "smig/em_model.hpp"

#include <cmath>
#include <string>

#include "smig/error.hpp"
#include "smig/specfun.hpp"

namespace smig {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, "em_model", msg);
}

}  // namespace

MediumParams MediumParams::from_relative(double eps_rel, double sigma, double frequency_hz,
                                         double mu) {
  MediumParams m;
  m.eps_b = eps_rel * kVacuumPermittivity;
  m.sigma_b = sigma;
  m.mu_b = mu;
  m.omega = 2.0 * std::numbers::pi * frequency_hz;
  m.validate();
  return m;
}

void MediumParams::validate() const {
  if (!(eps_b > 0.0) || !std::isfinite(eps_b)) fail(ErrorKind::config, "eps_b must be > 0");
  if (!(sigma_b >= 0.0) || !std::isfinite(sigma_b)) fail(ErrorKind::config, "sigma_b must be >= 0");
  if (!(mu_b > 0.0) || !std::isfinite(mu_b)) fail(ErrorKind::config, "mu_b must be > 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) fail(ErrorKind::config, "omega must be > 0");
}

ComplexWavenumber wavenumber(const MediumParams& medium) {
  medium.validate();
  const cplx k2 = medium.omega * medium.omega * medium.mu_b *
                  cplx{medium.eps_b, medium.sigma_b / medium.omega};
  // std::sqrt uses the principal branch: Re >= 0, and Im >= 0 since Im k2 >= 0
  return {std::sqrt(k2)};
}

double lossless_wavenumber(const MediumParams& medium) {
  medium.validate();
  return medium.omega * std::sqrt(medium.mu_b * medium.eps_b);
}

double wavelength(const ComplexWavenumber& k) {
  if (!(k.k.real() > 0.0)) fail(ErrorKind::domain, "wavelength requires Re(k) > 0");
  return 2.0 * std::numbers::pi / k.k.real();
}

AntennaArray::AntennaArray(std::vector<double> angles, double radius)
    : angles_(std::move(angles)), radius_(radius) {
  if (!(radius_ > 0.0)) fail(ErrorKind::config, "array radius must be > 0");
  if (angles_.size() < 2) fail(ErrorKind::config, "array needs at least 2 antennas");
  positions_.reserve(angles_.size());
  for (double a : angles_) positions_.emplace_back(radius_ * std::cos(a), radius_ * std::sin(a));
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t j = i + 1; j < positions_.size(); ++j)
      if ((positions_[i] - positions_[j]).norm() <= 1e-12 * radius_)
        fail(ErrorKind::config, "antenna positions " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " coincide");
}

AntennaArray antenna_array(int count, double radius) {
  if (count < 2) fail(ErrorKind::config, "N must be >= 2 (imaging needs off-diagonal data)");
  if (!(radius > 0.0)) fail(ErrorKind::config, "array radius must be > 0");
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n)
    angles[static_cast<std::size_t>(n)] =
        1.5 * std::numbers::pi - 2.0 * std::numbers::pi * n / count;
  return AntennaArray(std::move(angles), radius);
}

cplx incident_field(const Vec2& d, const Vec2& r, const ComplexWavenumber& k) {
  const double dist = (d - r).norm();
  if (dist == 0.0) fail(ErrorKind::singularity, "incident field evaluated at its source point");
  return cplx{0.0, -0.25} * specfun::hankel1_0(k.k * dist);
}

double smallness_index(double anomaly_radius, double eps_star, const MediumParams& medium) {
  if (!(anomaly_radius > 0.0) || !(eps_star > 0.0))
    fail(ErrorKind::config, "smallness_index needs positive radius and permittivity");
  medium.validate();
  return std::sqrt(eps_star / medium.eps_b) * 2.0 * anomaly_radius;
}

}  // namespace smig
