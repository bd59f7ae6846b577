#include "smig/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smig/error.hpp"

namespace smig::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kSeriesSwitch = 2.0;
// exp(709) is the double overflow threshold; J grows like exp(|Im z|).
constexpr double kMaxImag = 700.0;
constexpr cplx kI{0.0, 1.0};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, "specfun", msg);
}

void check_argument(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(ErrorKind::domain, "non-finite argument");
  if (std::abs(z) > kMaxArgument)
    fail(ErrorKind::domain, "|z| exceeds supported limit 1e4");
  if (std::abs(z.imag()) > kMaxImag)
    fail(ErrorKind::domain, "|Im z| exceeds 700, result overflows");
}

void check_order(int order) {
  if (order > kMaxOrder || order < -kMaxOrder)
    fail(ErrorKind::domain, "|order| exceeds supported limit 512");
}

// (-1)^n
constexpr double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// i^n for n >= 0
cplx i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Ascending series J_n(z) = (z/2)^n sum_k (-z^2/4)^k / (k! (n+k)!), n >= 0.
cplx ascending_series(int n, cplx z) {
  const cplx half = 0.5 * z;
  const cplx lead = std::exp(static_cast<double>(n) * std::log(half) - std::lgamma(n + 1.0));
  const cplx q = -half * half;
  cplx term{1.0, 0.0};
  cplx sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

// log of the upper bound (|z|/2)^n / n! on |J_n(z)| e^{-|Im z|}.
double log_tail_bound(int n, double az) {
  if (n == 0) return 0.0;
  return n * std::log(0.5 * az) - std::lgamma(n + 1.0);
}

// Starting order for the downward recurrence. The start must sit far enough
// into the evanescent regime that J_start is negligible both absolutely and
// relative to the highest order requested.
int miller_start(int max_order, double az) {
  int start = std::max(max_order, static_cast<int>(std::ceil(az))) + 10;
  const double ref = log_tail_bound(std::max(max_order, 1), az);
  while (log_tail_bound(start, az) > -46.0 || log_tail_bound(start, az) - ref > -30.0)
    ++start;
  return start;
}

// Downward recurrence for Re z >= 0, |z| > 0.
std::vector<cplx> miller_sequence(int max_order, cplx z) {
  const double az = std::abs(z);
  const int start = miller_start(max_order, az);
  const bool upper = z.imag() >= 0.0;
  // target = exp(-iz) (upper half plane) or exp(+iz): magnitude exp(|Im z|)
  const cplx c = upper ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
  const cplx target = std::exp(c * z);

  std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1, cplx{});
  const cplx two_over_z = 2.0 / z;
  cplx f_next{0.0, 0.0};
  cplx f{1e-30, 0.0};
  cplx norm{0.0, 0.0};
  constexpr double kRescale = 1e250;

  for (int n = start; n >= 0; --n) {
    if (n <= max_order) out[static_cast<std::size_t>(n)] = f;
    // c^n with c = -i is i^{-n} = i^{(4 - n mod 4) mod 4}
    const cplx cn = upper ? i_pow((4 - (n & 3)) & 3) : i_pow(n);
    norm += (n == 0 ? 1.0 : 2.0) * f * cn;
    if (n == 0) break;
    const cplx f_prev = static_cast<double>(n) * two_over_z * f - f_next;
    f_next = f;
    f = f_prev;
    if (std::abs(f) > kRescale) {
      const double s = 1.0 / kRescale;
      f *= s;
      f_next *= s;
      norm *= s;
      for (int m = n; m <= max_order; ++m) out[static_cast<std::size_t>(m)] *= s;
    }
  }
  const cplx scale = target / norm;
  for (auto& v : out) v *= scale;
  return out;
}

// Hankel asymptotic expansion for order nu in {0,1}, Re z > 0 (|arg z| < pi).
// kind 1 -> H^(1), kind 2 -> H^(2).
cplx hankel_asymptotic(int nu, cplx z, int kind) {
  const double mu = 4.0 * nu * nu;
  const cplx unit = (kind == 1) ? kI : -kI;
  cplx term{1.0, 0.0};
  cplx sum = term;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= unit * (mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started diverging
    sum += term;
    prev = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
  }
  const cplx phase = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * std::exp(unit * phase) * sum;
}

cplx j_asymptotic(int nu, cplx z) {
  return 0.5 * (hankel_asymptotic(nu, z, 1) + hankel_asymptotic(nu, z, 2));
}

cplx y_asymptotic(int nu, cplx z) {
  return (hankel_asymptotic(nu, z, 1) - hankel_asymptotic(nu, z, 2)) / (2.0 * kI);
}

// J_0..J_max for Re z >= 0, z != 0.
std::vector<cplx> sequence_right_half(int max_order, cplx z) {
  if (std::abs(z) <= kSeriesSwitch) {
    std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) out[static_cast<std::size_t>(n)] = ascending_series(n, z);
    return out;
  }
  return miller_sequence(max_order, z);
}

// Y0 and Y1 from Neumann series over J_n(z), |z| <= 25.
std::pair<cplx, cplx> y01_neumann(cplx z) {
  const int top = miller_start(0, std::abs(z));
  const auto j = bessel_j_sequence(top + 1, z);
  const cplx lg = std::log(0.5 * z) + kEulerGamma;
  cplx s0{0.0, 0.0};
  cplx s1{0.0, 0.0};
  for (int k = 1; 2 * k + 1 <= top + 1; ++k) {
    const double sgn = parity(k);
    s0 += sgn * j[static_cast<std::size_t>(2 * k)] / static_cast<double>(k);
    s1 += sgn * (j[static_cast<std::size_t>(2 * k - 1)] - j[static_cast<std::size_t>(2 * k + 1)]) /
          static_cast<double>(k);
  }
  const cplx y0 = (2.0 / kPi) * lg * j[0] - (4.0 / kPi) * s0;
  const cplx y1 = -2.0 / (kPi * z) * j[0] + (2.0 / kPi) * lg * j[1] + (2.0 / kPi) * s1;
  return {y0, y1};
}

}  // namespace

void SeriesTruncation::validate() const {
  if (max_order < 1 || max_order > kMaxOrder)
    fail(ErrorKind::config, "SeriesTruncation.max_order must lie in [1, 512]");
  if (!(abs_tol > 0.0)) fail(ErrorKind::config, "SeriesTruncation.abs_tol must be > 0");
}

std::vector<cplx> bessel_j_sequence(int max_order, cplx z) {
  if (max_order < 0) fail(ErrorKind::domain, "max_order must be nonnegative");
  check_order(max_order);
  check_argument(z);
  if (z == cplx{0.0, 0.0}) {
    std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1, cplx{});
    out[0] = 1.0;
    return out;
  }
  if (z.real() >= 0.0) return sequence_right_half(max_order, z);
  // J_n(-z) = (-1)^n J_n(z)
  auto out = sequence_right_half(max_order, -z);
  for (int n = 1; n <= max_order; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  return out;
}

cplx bessel_j(int order, cplx z) {
  check_order(order);
  check_argument(z);
  const int n = std::abs(order);
  const double sign = order < 0 ? parity(n) : 1.0;
  if (z == cplx{0.0, 0.0}) return n == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};

  const bool reflect = z.real() < 0.0;
  const cplx w = reflect ? -z : z;
  const double reflect_sign = reflect ? parity(n) : 1.0;

  cplx value;
  if (n <= 1 && std::abs(w) > kAsymptoticSwitch) {
    value = j_asymptotic(n, w);
  } else if (std::abs(w) <= kSeriesSwitch) {
    value = ascending_series(n, w);
  } else {
    value = miller_sequence(n, w)[static_cast<std::size_t>(n)];
  }
  return sign * reflect_sign * value;
}

double bessel_j(int order, double x) { return bessel_j(order, cplx{x, 0.0}).real(); }

cplx bessel_y(int order, cplx z) {
  if (order != 0 && order != 1) fail(ErrorKind::domain, "bessel_y supports orders 0 and 1 only");
  check_argument(z);
  if (z == cplx{0.0, 0.0}) fail(ErrorKind::singularity, "Y_s(z) is singular at z = 0");

  if (std::abs(z) <= kAsymptoticSwitch) {
    const auto [y0, y1] = y01_neumann(z);
    return order == 0 ? y0 : y1;
  }
  if (z.real() >= 0.0) return y_asymptotic(order, z);
  // z = w e^{+i pi} (Im z >= 0) or w e^{-i pi}:
  // Y_n(w e^{+-i pi}) = (-1)^n Y_n(w) +- 2i (-1)^n J_n(w)
  const cplx w = -z;
  const double p = parity(order);
  const double side = z.imag() >= 0.0 ? 1.0 : -1.0;
  return p * y_asymptotic(order, w) + side * 2.0 * kI * p * j_asymptotic(order, w);
}

cplx hankel1_0(cplx z) {
  check_argument(z);
  if (z == cplx{0.0, 0.0}) fail(ErrorKind::singularity, "H0(z) is singular at z = 0");
  if (std::abs(z) > kAsymptoticSwitch && z.real() >= 0.0) return hankel_asymptotic(0, z, 1);
  return bessel_j(0, z) + kI * bessel_y(0, z);
}

std::vector<cplx> hankel1_sequence(int max_order, cplx z) {
  if (max_order < 0) fail(ErrorKind::domain, "max_order must be nonnegative");
  check_order(max_order);
  check_argument(z);
  if (z == cplx{0.0, 0.0}) fail(ErrorKind::singularity, "H_n(z) is singular at z = 0");

  std::vector<cplx> h(static_cast<std::size_t>(max_order) + 1);
  if (std::abs(z) > kAsymptoticSwitch && z.real() >= 0.0) {
    h[0] = hankel_asymptotic(0, z, 1);
    if (max_order >= 1) h[1] = hankel_asymptotic(1, z, 1);
  } else {
    h[0] = bessel_j(0, z) + kI * bessel_y(0, z);
    if (max_order >= 1) h[1] = bessel_j(1, z) + kI * bessel_y(1, z);
  }
  for (int n = 1; n < max_order; ++n)
    h[static_cast<std::size_t>(n + 1)] =
        (2.0 * n) / z * h[static_cast<std::size_t>(n)] - h[static_cast<std::size_t>(n - 1)];
  return h;
}

cplx jacobi_anger_partial(double x, double theta, const SeriesTruncation& trunc) {
  trunc.validate();
  if (!(x >= 0.0)) fail(ErrorKind::domain, "jacobi_anger_partial requires x >= 0");
  const auto j = bessel_j_sequence(trunc.max_order, cplx{x, 0.0});
  cplx sum = j[0];
  for (int s = 1; s <= trunc.max_order; ++s) {
    // the +s and -s terms: i^s J_s e^{is t} + i^{-s} J_{-s} e^{-is t} = 2 i^s J_s cos(s t)
    sum += 2.0 * i_pow(s) * j[static_cast<std::size_t>(s)] * std::cos(s * theta);
  }
  return sum;
}

}  // namespace smig::specfun
