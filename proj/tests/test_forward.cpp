#include <doctest.h>

#include <numbers>

#include <Eigen/SVD>

#include "smig/error.hpp"
#include "support.hpp"

using namespace smig;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;  // sentinel: nothing thrown
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

Anomaly random_anomaly(std::mt19937_64& g) {
  std::uniform_real_distribution<double> eps(1.0, 80.0);
  std::uniform_real_distribution<double> sig(0.0, 3.0);
  std::uniform_real_distribution<double> rad(0.001, 0.015);
  Anomaly a;
  a.center = test::random_point(g, 0.05);
  a.radius = rad(g);
  a.eps_star = eps(g) * kVacuumPermittivity;
  a.sigma_star = sig(g);
  return a;
}

double max_rel_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Born entry (1,2) of the reference scenario") {
  const auto s = test::reference_born();
  CHECK(s.kind == MatrixKind::full);
  CHECK(s.provenance == Provenance::born);
  CHECK(s.frequency_hz == 1.0e9);
  CHECK(test::rel_err(s.entries(0, 1), {4.68675162668615e-08, 5.30794174571298e-08}) < 1e-12);
}

TEST_CASE("Born matrices are reciprocal and rank one per anomaly") {
  std::mt19937_64 g(100);
  const auto array = antenna_array(16, 0.09);
  const auto medium = test::reference_medium();
  for (int i = 0; i < 100; ++i) {
    const auto a = random_anomaly(g);
    const auto s = born_smatrix(array, std::span<const Anomaly>(&a, 1), medium);
    CHECK((s.entries - s.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * s.entries.cwiseAbs().maxCoeff());
    const auto sv = singular_values(s.entries);
    CHECK(sv(1) / sv(0) <= 1e-10);
  }
}

TEST_CASE("rank equals the number of well separated anomalies") {
  const auto array = antenna_array(16, 0.09);
  const auto medium = test::reference_medium();
  const std::vector<Vec2> centers{{0.0, 0.0}, {0.07, 0.0}, {-0.035, 0.06}};
  for (std::size_t j = 1; j <= 3; ++j) {
    std::vector<Anomaly> as;
    for (std::size_t i = 0; i < j; ++i) {
      Anomaly a;
      a.center = centers[i];
      as.push_back(a);
    }
    const auto sv = singular_values(born_smatrix(array, as, medium).entries);
    int above = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sv(0)) ++above;
    CHECK(above == static_cast<int>(j));
  }
}

TEST_CASE("doubling the contrast doubles the Born matrix") {
  const auto medium = test::reference_medium();
  const auto array = antenna_array(16, 0.09);
  Anomaly a;
  Anomaly b = a;
  b.eps_star = medium.eps_b + 2.0 * (a.eps_star - medium.eps_b);
  b.sigma_star = medium.sigma_b + 2.0 * (a.sigma_star - medium.sigma_b);
  const auto sa = born_smatrix(array, std::span<const Anomaly>(&a, 1), medium);
  const auto sb = born_smatrix(array, std::span<const Anomaly>(&b, 1), medium);
  CHECK(max_rel_dev(sb.entries, 2.0 * sa.entries) <= 1e-14);
}

TEST_CASE("joint rotation by 2pi/N permutes the Born matrix cyclically") {
  std::mt19937_64 g(8);
  const int n = 16;
  const auto array = antenna_array(n, 0.09);
  const auto medium = test::reference_medium();
  const double step = 2.0 * std::numbers::pi / n;
  const Eigen::Matrix2d rot = Eigen::Matrix2d{{std::cos(step), -std::sin(step)}, {std::sin(step), std::cos(step)}};
  for (int i = 0; i < 100; ++i) {
    auto a = random_anomaly(g);
    auto b = a;
    b.center = rot * a.center;
    const auto sa = born_smatrix(array, std::span<const Anomaly>(&a, 1), medium).entries;
    const auto sb = born_smatrix(array, std::span<const Anomaly>(&b, 1), medium).entries;
    // antenna m seen from the rotated target sits where antenna m+1 sits for the original
    double dev = 0.0;
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        dev = std::max(dev, std::abs(sb(m, j) - sa((m + 1) % n, (j + 1) % n)));
    CHECK(dev <= 1e-10 * sa.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Born errors") {
  const auto array = antenna_array(16, 0.09);
  Anomaly on_antenna;
  on_antenna.center = array.position(3);
  CHECK(kind_of([&] { born_smatrix(array, std::span<const Anomaly>(&on_antenna, 1), test::reference_medium()); }) ==
        ErrorKind::singularity);
  const auto lossless = MediumParams::from_relative(20.0, 0.0, 1e9);
  Anomaly a;
  CHECK(kind_of([&] { born_smatrix(array, std::span<const Anomaly>(&a, 1), lossless); }) == ErrorKind::division);
  CHECK_NOTHROW(born_smatrix(array, std::span<const Anomaly>(&a, 1), lossless, ContrastDenominator::permittivity));
}

TEST_CASE("exact disc: zero contrast, reciprocity, geometry") {
  const auto array = antenna_array(16, 0.09);
  const auto medium = test::reference_medium();
  Anomaly none;
  none.eps_star = medium.eps_b;
  none.sigma_star = medium.sigma_b;
  CHECK(exact_disc_smatrix(array, none, medium).entries.cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 g(31);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_anomaly(g);
    const auto s = exact_disc_smatrix(array, a, medium);
    CHECK(s.provenance == Provenance::exact_disc);
    CHECK((s.entries - s.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * s.entries.cwiseAbs().maxCoeff());
  }

  Anomaly big;
  big.center = Vec2(0.0, 0.0);
  big.radius = 0.095;
  CHECK(kind_of([&] { exact_disc_smatrix(array, big, medium); }) == ErrorKind::geometry);
  // the margin pushes the first admissible stopping order past the order cap
  Anomaly a;
  CHECK(kind_of([&] { exact_disc_smatrix(array, a, medium, specfun::SeriesTruncation{511, 1e-10}); }) ==
        ErrorKind::truncation);
}

TEST_CASE("exact disc approaches Born for a small weak disc") {
  const auto array = antenna_array(16, 0.09);
  const auto medium = test::reference_medium();
  Anomaly a;
  a.radius = wavelength(wavenumber(medium)) / 50.0;
  a.eps_star = 22.0 * kVacuumPermittivity;
  a.sigma_star = 0.22;
  const auto born = born_smatrix(array, std::span<const Anomaly>(&a, 1), medium);
  const auto exact = exact_disc_smatrix(array, a, medium);
  double worst = 0.0;
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      worst = std::max(worst, test::rel_err(exact.entries(m, n), born.entries(m, n)));
  MESSAGE("small-disc exact vs Born worst entrywise relative deviation: " << worst);
  CHECK(worst <= 0.10);
}

TEST_CASE("diagonal contamination") {
  const auto s = test::reference_born();
  CHECK(contaminate_diagonal(s, 0.0, ContaminationMode::constant, 0).entries == s.entries);
  for (auto mode : {ContaminationMode::constant, ContaminationMode::random}) {
    const auto c = contaminate_diagonal(s, 5.0, mode, 42);
    Eigen::MatrixXcd off = c.entries - s.entries;
    Eigen::MatrixXcd s_off = s.entries;
    s_off.diagonal().setZero();
    const double largest = s_off.cwiseAbs().maxCoeff();
    for (int n = 0; n < 16; ++n) {
      CHECK(std::abs(off(n, n)) == doctest::Approx(5.0 * largest).epsilon(1e-12));
      if (mode == ContaminationMode::constant) CHECK(std::abs(off(n, n) - off(0, 0)) <= 1e-12 * std::abs(off(0, 0)));
      if (mode == ContaminationMode::constant) CHECK(std::arg(off(n, n)) == doctest::Approx(std::numbers::pi / 4));
    }
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    const auto sv = singular_values(c.entries);
    int above = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) >= 0.02 * sv(0)) ++above;
    CHECK(above >= 3);
  }
  CHECK(contaminate_diagonal(s, 5.0, ContaminationMode::random, 9).entries ==
        contaminate_diagonal(s, 5.0, ContaminationMode::random, 9).entries);
  CHECK(contaminate_diagonal(s, 5.0, ContaminationMode::random, 9).entries !=
        contaminate_diagonal(s, 5.0, ContaminationMode::random, 10).entries);
  auto z = s;
  z.entries.diagonal().setZero();
  z.kind = MatrixKind::zero_diagonal;
  CHECK(kind_of([&] { contaminate_diagonal(z, 1.0, ContaminationMode::constant, 0); }) == ErrorKind::kind);
  CHECK(kind_of([&] { contaminate_diagonal(s, -1.0, ContaminationMode::constant, 0); }) == ErrorKind::config);
}

TEST_CASE("measurement noise") {
  const auto s = test::reference_born();
  CHECK(add_noise(s, std::numeric_limits<double>::infinity(), 1).entries == s.entries);
  CHECK(add_noise(s, 20.0, 1).entries == add_noise(s, 20.0, 1).entries);
  CHECK(add_noise(s, 20.0, 1).entries != add_noise(s, 20.0, 2).entries);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double snr = sample_snr_db(s, add_noise(s, 20.0, seed));
    CHECK(snr >= 19.5);
    CHECK(snr <= 20.5);
  }
  CHECK(kind_of([&] { add_noise(s, std::nan(""), 1); }) == ErrorKind::config);
  auto zero = s;
  zero.entries.setZero();
  CHECK(kind_of([&] { add_noise(zero, 10.0, 1); }) == ErrorKind::data);
  auto z = s;
  z.entries.diagonal().setZero();
  z.kind = MatrixKind::zero_diagonal;
  CHECK(add_noise(z, 10.0, 3).entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("total minus incident") {
  const auto born = test::reference_born();
  std::mt19937_64 g(4);
  std::normal_distribution<double> nd(0.0, 1e-3);
  for (int i = 0; i < 100; ++i) {
    ScatteringMatrix inc;
    inc.entries = Eigen::MatrixXcd::NullaryExpr(16, 16, [&] { return cplx{nd(g), nd(g)}; });
    inc.frequency_hz = born.frequency_hz;
    ScatteringMatrix tot = inc;
    tot.entries += born.entries;
    const auto r = subtract(tot, inc);
    CHECK(r.provenance == Provenance::measured_subtracted);
    CHECK((r.entries - born.entries).cwiseAbs().maxCoeff() <= 1e-14);
  }
  CHECK(subtract(born, born).entries.cwiseAbs().maxCoeff() == 0.0);
  auto zero = born;
  zero.entries.setZero();
  CHECK(subtract(born, zero).entries == born.entries);
  auto other_f = born;
  other_f.frequency_hz = 1.1e9;
  CHECK(kind_of([&] { subtract(born, other_f); }) == ErrorKind::shape);
  ScatteringMatrix small;
  small.entries = Eigen::MatrixXcd::Zero(4, 4);
  small.frequency_hz = born.frequency_hz;
  CHECK(kind_of([&] { subtract(born, small); }) == ErrorKind::shape);
}
