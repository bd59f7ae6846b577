#pragma once

// Background medium, wavenumber, antenna ring, and the 2D line-source
// incident field E_inc(d, r) = -(i/4) H0^(1)(k |d - r|).

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace smig {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kVacuumPermeability = 4.0e-7 * std::numbers::pi;  // H/m

struct MediumParams {
  double eps_b = 20.0 * kVacuumPermittivity;  // absolute, F/m
  double sigma_b = 0.2;                       // S/m
  double mu_b = kVacuumPermeability;          // H/m
  double omega = 2.0e9 * std::numbers::pi;    // rad/s

  static MediumParams from_relative(double eps_rel, double sigma, double frequency_hz,
                                    double mu = kVacuumPermeability);

  double frequency_hz() const { return omega / (2.0 * std::numbers::pi); }
  void validate() const;
};

struct ComplexWavenumber {
  cplx k;
};

/// Principal square root of omega^2 mu_b (eps_b + i sigma_b / omega).
ComplexWavenumber wavenumber(const MediumParams& medium);

/// omega sqrt(mu_b eps_b): the phase constant with the conductivity dropped.
double lossless_wavenumber(const MediumParams& medium);

/// 2 pi / Re(k)
double wavelength(const ComplexWavenumber& k);

class AntennaArray {
 public:
  /// Antennas at radius * (cos a, sin a) for each angle a.
  AntennaArray(std::vector<double> angles, double radius);

  int count() const { return static_cast<int>(angles_.size()); }
  double radius() const { return radius_; }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<Vec2>& positions() const { return positions_; }
  const Vec2& position(int n) const { return positions_[static_cast<std::size_t>(n)]; }
  /// Unit direction d_n / |d_n|.
  Vec2 direction(int n) const { return positions_[static_cast<std::size_t>(n)] / radius_; }

 private:
  std::vector<double> angles_;
  double radius_;
  std::vector<Vec2> positions_;
};

/// Canonical ring: theta_n = 3pi/2 - 2pi(n-1)/N, n = 1..N.
AntennaArray antenna_array(int count, double radius);

cplx incident_field(const Vec2& d, const Vec2& r, const ComplexWavenumber& k);

/// sqrt(eps_star / eps_b) * diameter. Compare against wavelength() to decide
/// whether an inclusion counts as small.
double smallness_index(double anomaly_radius, double eps_star, const MediumParams& medium);

}  // namespace smig
