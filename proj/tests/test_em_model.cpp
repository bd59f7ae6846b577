#include <doctest.h>

#include <numbers>

#include <Eigen/Geometry>

#include "smig/error.hpp"
#include "smig/specfun.hpp"
#include "support.hpp"

using namespace smig;

TEST_CASE("reference wavenumber and wavelength") {
  const auto k = wavenumber(test::reference_medium());
  CHECK(test::rel_err(k.k, {94.10383328581357, 8.390395210459282}) < 1e-13);
  CHECK(wavelength(k) == doctest::Approx(2.0 * std::numbers::pi / 94.10383328581357).epsilon(1e-13));
  CHECK(lossless_wavenumber(test::reference_medium()) == doctest::Approx(93.72903876225604).epsilon(1e-13));
}

TEST_CASE("lossless medium gives a real wavenumber") {
  const auto m = MediumParams::from_relative(4.0, 0.0, 3.0e9);
  const auto k = wavenumber(m);
  CHECK(k.k.imag() == 0.0);
  CHECK(k.k.real() == doctest::Approx(lossless_wavenumber(m)).epsilon(1e-15));
}

TEST_CASE("medium validation") {
  CHECK_THROWS_AS(MediumParams::from_relative(0.0, 0.2, 1e9), Error);
  CHECK_THROWS_AS(MediumParams::from_relative(20.0, -1.0, 1e9), Error);
  CHECK_THROWS_AS(MediumParams::from_relative(20.0, 0.2, 0.0), Error);
}

TEST_CASE("antenna ring layout") {
  const auto a = antenna_array(16, 0.09);
  CHECK(a.count() == 16);
  CHECK(a.position(0).x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a.position(0).y() == doctest::Approx(-0.09));
  // counter-clockwise from the bottom means n = 2 lies at angle 3pi/2 - 2pi/16
  CHECK(a.angles()[1] == doctest::Approx(1.5 * std::numbers::pi - std::numbers::pi / 8.0));
  for (int n = 0; n < 16; ++n) CHECK(a.position(n).norm() == doctest::Approx(0.09));
  CHECK_THROWS_AS(antenna_array(1, 0.09), Error);
  CHECK_THROWS_AS(antenna_array(16, 0.0), Error);
  CHECK_THROWS_AS(AntennaArray({0.0, 2.0 * std::numbers::pi}, 1.0), Error);
}

TEST_CASE("incident field against the Hankel oracle") {
  const cplx e = incident_field(Vec2(0.0, 0.0), Vec2(1.0, 0.0), {cplx{10.0, 0.0}});
  const cplx h0{-0.2459357644513483, 0.05567116728359939};
  CHECK(test::rel_err(e, cplx{0.0, -0.25} * h0) < 1e-12);
  try {
    incident_field(Vec2(0.1, 0.2), Vec2(0.1, 0.2), {cplx{10.0, 0.0}});
    FAIL("expected a singularity error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::singularity);
  }
}

TEST_CASE("incident field is symmetric and rotation invariant") {
  const auto k = wavenumber(test::reference_medium());
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const Vec2 d = test::random_point(g, 0.1);
    const Vec2 r = test::random_point(g, 0.1);
    CHECK(incident_field(d, r, k) == incident_field(r, d, k));
    const Eigen::Rotation2Dd rot(ang(g));
    CHECK(std::abs(incident_field(rot * d, rot * r, k) - incident_field(d, r, k)) <=
          1e-12 * std::abs(incident_field(d, r, k)));
  }
}

TEST_CASE("smallness index of the two reference inclusions") {
  const auto m = test::reference_medium();
  const double small = smallness_index(0.010, 55.0 * kVacuumPermittivity, m);
  const double extended = smallness_index(0.05, 15.0 * kVacuumPermittivity, m);
  CHECK(std::round(small * 1e4) / 1e4 == doctest::Approx(0.0332).epsilon(1e-12));
  CHECK(std::round(extended * 1e4) / 1e4 == doctest::Approx(0.0866).epsilon(1e-12));
  const double lambda = wavelength(wavenumber(m));
  CHECK(small < lambda);
  CHECK(extended > lambda);
}
