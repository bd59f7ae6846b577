#pragma once

// Integer-order Bessel functions of complex argument, H0^(1), and the
// truncated Jacobi-Anger series.
//
// Method by region (after reflecting to Re z >= 0 where needed):
//   |z| <= 2           ascending power series (no cancellation there)
//   2 < |z|            Miller backward recurrence, normalized against
//                      exp(-iz) = J0 + 2 sum (-i)^s J_s (exp(+iz) when Im z < 0)
//                      so the normalizing sum never cancels
//   |z| > 25, s in 0,1 Hankel asymptotic expansions
// Y0/Y1 for |z| <= 25 come from Neumann series over the J sequence.

#include <complex>
#include <vector>

namespace smig::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 512;
inline constexpr double kMaxArgument = 1.0e4;
inline constexpr double kAsymptoticSwitch = 25.0;

struct SeriesTruncation {
  int max_order = 64;     // S_max: the series keeps 0 < |s| <= max_order
  double abs_tol = 1e-10;

  void validate() const;
};

cplx bessel_j(int order, cplx z);
double bessel_j(int order, double x);

/// J_0(z), ..., J_max_order(z) from a single downward recurrence.
std::vector<cplx> bessel_j_sequence(int max_order, cplx z);

/// Y_s for s in {0, 1}; principal branch.
cplx bessel_y(int order, cplx z);

/// Below the asymptotic switch this is J0 + iY0, which loses relative
/// accuracy like exp(2 Im z) * eps when Im z is large; imaging arguments keep
/// Im z within a few units.
cplx hankel1_0(cplx z);

/// H^(1)_0(z), ..., H^(1)_max_order(z) by forward recurrence.
std::vector<cplx> hankel1_sequence(int max_order, cplx z);

/// J0(x) + sum_{0<|s|<=S_max} i^s J_s(x) e^{i s theta}.
cplx jacobi_anger_partial(double x, double theta, const SeriesTruncation& trunc);

}  // namespace smig::specfun
