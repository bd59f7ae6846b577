#include <doctest.h>

#include <numbers>

#include "smig/error.hpp"
#include "smig/imaging.hpp"
#include "smig/structure.hpp"
#include "support.hpp"

using namespace smig;

namespace {

const double kReal = 93.72903876225604;  // lossless k of the reference medium
const Vec2 kStar(0.01, 0.03);

cplx mean_plane_wave(const Vec2& r, const AntennaArray& array, double k, const Vec2& center) {
  cplx sum{0.0, 0.0};
  for (int n = 0; n < array.count(); ++n)
    sum += std::exp(cplx{0.0, k * array.direction(n).dot(r - center)});
  return sum / static_cast<double>(array.count());
}

}  // namespace

TEST_CASE("psi1 basics") {
  const specfun::SeriesTruncation t{40, 1e-10};
  CHECK(psi1(kReal, 0.3, kStar, kStar, t) == cplx{0.0, 0.0});
  // k|r - rc| = 8 with theta - phi = 0.7: exp(i 8 cos 0.7) - J0(8)
  const Vec2 r = Vec2(0.0, 0.0) + 8.0 / kReal * Vec2(1.0, 0.0);
  const cplx v = psi1(kReal, 0.7, r, Vec2(0.0, 0.0), t);
  CHECK(test::rel_err(v, {0.8148580964920315, -0.1637076145435920}) < 1e-12);
}

TEST_CASE("psi1 completes the Jacobi-Anger expansion") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const specfun::SeriesTruncation t{64, 1e-10};
  for (int i = 0; i < 100; ++i) {
    const Vec2 r = test::random_point(g, 0.1);
    const Vec2 c = test::random_point(g, 0.1);
    const double th = ang(g);
    const Vec2 dir(std::cos(th), std::sin(th));
    const cplx lhs = psi1(kReal, th, r, c, t) + specfun::bessel_j(0, kReal * (r - c).norm());
    CHECK(std::abs(lhs - std::exp(cplx{0.0, kReal * dir.dot(r - c)})) <= 1e-11);
  }
}

TEST_CASE("finite-sum identities behind the closed form") {
  const auto array = antenna_array(16, 0.09);
  const specfun::SeriesTruncation t{64, 1e-10};
  std::mt19937_64 g(2);
  for (int i = 0; i < 100; ++i) {
    const Vec2 r = test::random_point(g, 0.1);
    const double x = kReal * (r - kStar).norm();
    // (1/N) sum_{m,n} a_m a_n = N (J0 + mean psi1)^2
    const cplx mean = mean_plane_wave(r, array, kReal, kStar);
    const cplx series = specfun::bessel_j(0, x) + psi1_mean(kReal, array, r, kStar, t);
    CHECK(std::abs(mean - series) <= 1e-11);
    // (1/N) sum_n a_n^2 = J0(2x) + mean psi1(2k)
    const cplx mean2 = mean_plane_wave(r, array, 2.0 * kReal, kStar);
    CHECK(std::abs(mean2 - (specfun::bessel_j(0, 2.0 * x) + psi1_mean(2.0 * kReal, array, r, kStar, t))) <= 1e-11);
  }
}

TEST_CASE("structure values peak at 1 for every array size") {
  StructureConfig cfg;
  for (int n = 2; n <= 40; ++n) {
    const auto array = antenna_array(n, 0.09);
    CHECK(std::abs(structure_diag(kStar, array, kReal, kStar, cfg) - 1.0) <= 1e-12);
    CHECK(std::abs(structure_full(kStar, array, kReal, kStar, cfg) - 1.0) <= 1e-12);
  }
}

TEST_CASE("structure_full against direct sums") {
  const auto array = antenna_array(16, 0.09);
  const double lambda = 2.0 * std::numbers::pi / kReal;
  StructureConfig cfg;
  for (int i = 0; i < 100; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 100.0;
    const Vec2 r = kStar + 0.25 * lambda * Vec2(std::cos(a), std::sin(a));
    const double direct = std::norm(mean_plane_wave(r, array, kReal, kStar));
    CHECK(std::abs(structure_full(r, array, kReal, kStar, cfg) - direct) <= 1e-8);
  }
  cfg.artifact_locations = {Vec2(-0.03, -0.02), Vec2(0.04, 0.0)};
  std::mt19937_64 g(3);
  for (int i = 0; i < 100; ++i) {
    const Vec2 r = test::random_point(g, 0.08);
    cplx sum = mean_plane_wave(r, array, kReal, kStar);
    for (const auto& rm : cfg.artifact_locations) sum += mean_plane_wave(r, array, kReal, rm);
    CHECK(std::abs(structure_full(r, array, kReal, kStar, cfg) - std::norm(sum)) <= 1e-8);
  }
  cfg.artifact_locations = {kStar};
  CHECK_THROWS_AS(structure_full(Vec2(0.0, 0.0), array, kReal, kStar, cfg), Error);
}

TEST_CASE("structure_diag against the double sum") {
  const auto array = antenna_array(16, 0.09);
  const Vec2 r = kStar + Vec2(0.01, 0.0);
  CHECK(std::abs(structure_diag(r, array, kReal, kStar, {}) - diag_double_sum(r, array, kReal, kStar)) <= 1e-8);
}

TEST_CASE("structure_diag approaches J0^2 for large N") {
  const Vec2 r = kStar + Vec2(0.012, -0.004);
  const double j = specfun::bessel_j(0, kReal * (r - kStar).norm());
  const auto array = antenna_array(512, 0.09);
  CHECK(std::abs(structure_diag(r, array, kReal, kStar, {}) - j * j) <= 4.0 / 512);
}

TEST_CASE("ideal plane-wave matrices") {
  const auto array = antenna_array(16, 0.09);
  const auto origin = ideal_plane_wave_matrix(array, kReal, Vec2(0.0, 0.0), MatrixKind::full);
  CHECK((origin.entries.array() - cplx{1.0 / 16, 0.0}).abs().maxCoeff() <= 1e-15);
  const auto full = ideal_plane_wave_matrix(array, kReal, kStar, MatrixKind::full);
  CHECK((full.entries - full.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto dec = svd(full);
  CHECK(dec.tau(1) / dec.tau(0) <= 1e-12);
  const auto zd = ideal_plane_wave_matrix(array, kReal, kStar, MatrixKind::zero_diagonal);
  CHECK(zd.kind == MatrixKind::zero_diagonal);
  CHECK(zd.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(zd.provenance == Provenance::plane_wave);
}

TEST_CASE("diagonal identity validation") {
  const auto array = antenna_array(16, 0.09);
  const std::vector<Vec2> star{kStar};
  CHECK(validate_diag_identity(star, array, kReal, kStar, {64, 1e-10}).max_abs_deviation <= 1e-12);
  const auto grid = lattice_points(-0.1, 0.1, 21);
  const auto rep = validate_diag_identity(grid, array, kReal, kStar, {64, 1e-10});
  CHECK(rep.points == 441);
  CHECK(rep.max_abs_deviation <= 1e-8);
  // five terms cannot resolve k|r - r*| = 10
  const std::vector<Vec2> far{kStar + Vec2(10.0 / kReal, 0.0), kStar + Vec2(0.0, 10.0 / kReal)};
  CHECK(validate_diag_identity(far, array, kReal, kStar, {5, 1e-10}).max_abs_deviation > 1e-3);
}

TEST_CASE("bilinear form of the ideal zero-diagonal matrix is proportional to structure_diag") {
  const auto array = antenna_array(16, 0.09);
  const auto pts = lattice_points(-0.1, 0.1, 21);
  const auto rep = bilinear_structure_ratio(pts, array, kReal, kStar, {64, 1e-10});
  CHECK(rep.spread <= 1e-6);
  CHECK(rep.max_ratio == doctest::Approx(15.0 / 16.0).epsilon(1e-10));
}

TEST_CASE("validity margin") {
  const auto array = antenna_array(16, 0.09);
  CHECK(within_validity_margin(kStar, array, kReal, Vec2(0.0, 0.0)));
  CHECK_FALSE(within_validity_margin(array.position(0) * 0.99, array, kReal, kStar));
}
