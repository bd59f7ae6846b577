#include "smig/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "smig/error.hpp"
#include "smig/specfun.hpp"

namespace smig {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, "forward", msg);
}

constexpr cplx kI{0.0, 1.0};

// Independent engine per (stream, m, n) so entries can be filled in any order
// and still reproduce bit-for-bit. seed_seq and mt19937_64 are fully specified
// by the standard.
std::mt19937_64 entry_engine(std::uint64_t seed, std::uint32_t stream, int m, int n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream,
                    static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(n)};
  return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Standard complex normal (E|z|^2 = 1) by Box-Muller.
cplx complex_normal(std::mt19937_64& g) {
  double u1 = unit_uniform(g);
  while (u1 <= 0.0) u1 = unit_uniform(g);
  const double u2 = unit_uniform(g);
  const double r = std::sqrt(-std::log(u1));
  return std::polar(r, 2.0 * std::numbers::pi * u2);
}

constexpr std::uint32_t kStreamContamination = 1;
constexpr std::uint32_t kStreamNoise = 2;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(MatrixKind kind) {
  return kind == MatrixKind::full ? "full" : "zero_diagonal";
}

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::born: return "born";
    case Provenance::exact_disc: return "exact_disc";
    case Provenance::measured_subtracted: return "measured_subtracted";
    case Provenance::plane_wave: return "plane_wave";
  }
  return "unknown";
}

void Anomaly::validate(const MediumParams& medium, bool allow_zero_contrast) const {
  if (!(radius > 0.0)) fail(ErrorKind::config, "anomaly radius must be > 0");
  if (!(eps_star > 0.0)) fail(ErrorKind::config, "anomaly permittivity must be > 0");
  if (!(sigma_star >= 0.0)) fail(ErrorKind::config, "anomaly conductivity must be >= 0");
  if (!allow_zero_contrast && eps_star == medium.eps_b && sigma_star == medium.sigma_b)
    fail(ErrorKind::config, "anomaly has zero contrast with the background");
}

void ScatteringMatrix::validate() const {
  if (entries.rows() != entries.cols())
    fail(ErrorKind::shape, "scattering matrix must be square");
  if (kind == MatrixKind::zero_diagonal)
    for (int n = 0; n < size(); ++n)
      if (entries(n, n) != cplx{0.0, 0.0})
        fail(ErrorKind::kind, "zero_diagonal matrix has nonzero diagonal entry " +
                                  std::to_string(n + 1));
}

cplx contrast(const Anomaly& a, const MediumParams& medium, ContrastDenominator variant) {
  const double denom = variant == ContrastDenominator::conductivity
                           ? medium.omega * medium.sigma_b
                           : medium.omega * medium.eps_b;
  if (denom == 0.0)
    fail(ErrorKind::division,
         "conductivity contrast divides by omega*sigma_b = 0; select the permittivity "
         "denominator variant");
  return cplx{(a.eps_star - medium.eps_b) / medium.eps_b, (a.sigma_star - medium.sigma_b) / denom};
}

ScatteringMatrix born_smatrix(const AntennaArray& array, std::span<const Anomaly> anomalies,
                              const MediumParams& medium, ContrastDenominator variant) {
  medium.validate();
  const auto k = wavenumber(medium);
  const int n_ant = array.count();
  ScatteringMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(n_ant, n_ant);
  out.frequency_hz = medium.frequency_hz();
  out.provenance = Provenance::born;

  const cplx scale = kI * k.k * k.k * std::numbers::pi / (4.0 * medium.omega * medium.mu_b);
  for (const auto& a : anomalies) {
    a.validate(medium);
    for (int n = 0; n < n_ant; ++n)
      if ((array.position(n) - a.center).norm() == 0.0)
        fail(ErrorKind::singularity, "anomaly center coincides with antenna " + std::to_string(n + 1));
    Eigen::VectorXcd e(n_ant);
    for (int n = 0; n < n_ant; ++n) e(n) = incident_field(array.position(n), a.center, k);
    const cplx amp = a.radius * a.radius * scale * contrast(a, medium, variant);
    out.entries += amp * (e * e.transpose());
  }
  out.history.push_back("born anomalies=" + std::to_string(anomalies.size()) + " contrast=" +
                        (variant == ContrastDenominator::conductivity ? "conductivity"
                                                                      : "permittivity"));
  return out;
}

ScatteringMatrix exact_disc_smatrix(const AntennaArray& array, const Anomaly& anomaly,
                                    const MediumParams& medium,
                                    const specfun::SeriesTruncation& trunc,
                                    ContrastDenominator variant) {
  medium.validate();
  trunc.validate();
  // A contrast-free disc is a valid (empty) scatterer here: the result is 0.
  anomaly.validate(medium, true);
  const int n_ant = array.count();
  const auto kb = wavenumber(medium).k;
  const double rho = anomaly.radius;

  std::vector<double> dist(static_cast<std::size_t>(n_ant));
  std::vector<double> phi(static_cast<std::size_t>(n_ant));
  for (int n = 0; n < n_ant; ++n) {
    const Vec2 rel = array.position(n) - anomaly.center;
    dist[static_cast<std::size_t>(n)] = rel.norm();
    phi[static_cast<std::size_t>(n)] = std::atan2(rel.y(), rel.x());
    if (rel.norm() <= rho)
      fail(ErrorKind::geometry, "antenna " + std::to_string(n + 1) + " lies inside the disc");
  }

  ScatteringMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(n_ant, n_ant);
  out.frequency_hz = medium.frequency_hz();
  out.provenance = Provenance::exact_disc;

  const cplx eps_c_b{medium.eps_b, medium.sigma_b / medium.omega};
  const cplx eps_c_s{anomaly.eps_star, anomaly.sigma_star / medium.omega};
  const cplx chi = eps_c_s / eps_c_b - 1.0;
  if (chi == cplx{0.0, 0.0}) {
    out.history.push_back("exact_disc zero contrast");
    return out;
  }
  const cplx ks = std::sqrt(medium.omega * medium.omega * medium.mu_b * eps_c_s);

  const int min_order = static_cast<int>(std::ceil(std::abs(kb) * rho)) + trunc.max_order;
  const int cap = std::min(specfun::kMaxOrder - 1, min_order + 150);

  const auto jb = specfun::bessel_j_sequence(cap + 1, kb * rho);
  const auto js = specfun::bessel_j_sequence(cap + 1, ks * rho);
  const auto hb = specfun::hankel1_sequence(cap + 1, kb * rho);
  std::vector<std::vector<cplx>> h_ant;
  h_ant.reserve(static_cast<std::size_t>(n_ant));
  for (int n = 0; n < n_ant; ++n)
    h_ant.push_back(specfun::hankel1_sequence(cap, kb * dist[static_cast<std::size_t>(n)]));

  auto deriv = [](const std::vector<cplx>& c, int s, cplx z) {
    const auto u = static_cast<std::size_t>(s);
    return s == 0 ? -c[1] : c[u - 1] - static_cast<double>(s) / z * c[u];
  };

  // u_sc(d_m; d_n) = -(i/4) sum_s eps_s b_s H_s(k D_m) H_s(k D_n) cos(s (phi_m - phi_n))
  Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(n_ant, n_ant);
  double tail = std::numeric_limits<double>::infinity();
  int order = 0;
  bool converged = false;
  for (; order <= cap; ++order) {
    const auto u = static_cast<std::size_t>(order);
    const cplx jbp = deriv(jb, order, kb * rho);
    const cplx jsp = deriv(js, order, ks * rho);
    const cplx hbp = deriv(hb, order, kb * rho);
    const cplx num = ks * jsp * jb[u] - kb * jbp * js[u];
    const cplx den = kb * hbp * js[u] - ks * jsp * hb[u];
    const cplx b = num / den;
    const double weight = order == 0 ? 1.0 : 2.0;

    double term_max = 0.0;
    for (int m = 0; m < n_ant; ++m) {
      for (int n = m; n < n_ant; ++n) {
        const cplx t = weight * b * h_ant[static_cast<std::size_t>(m)][u] *
                       h_ant[static_cast<std::size_t>(n)][u] *
                       std::cos(order * (phi[static_cast<std::size_t>(m)] - phi[static_cast<std::size_t>(n)]));
        field(m, n) += t;
        term_max = std::max(term_max, std::abs(t));
      }
    }
    if (!std::isfinite(term_max)) break;
    const double scale = field.cwiseAbs().maxCoeff();
    tail = scale > 0.0 ? term_max / scale : term_max;
    if (order >= min_order && tail <= trunc.abs_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(ErrorKind::truncation, "disc series did not converge by order " + std::to_string(order) +
                                    "; achieved relative tail " + fmt(tail));

  for (int m = 0; m < n_ant; ++m)
    for (int n = 0; n < m; ++n) field(m, n) = field(n, m);
  field *= cplx{0.0, -0.25};

  // Map the physical scattered field onto the S-parameter normalization of
  // the Born model: S = i C / (4 omega mu_b chi) * (-u_sc). In the small-disc
  // limit -u_sc -> k^2 pi rho^2 chi E_inc E_inc, which recovers born_smatrix.
  const cplx c = contrast(anomaly, medium, variant);
  out.entries = -(kI * c / (4.0 * medium.omega * medium.mu_b * chi)) * field;
  out.history.push_back("exact_disc orders=" + std::to_string(order) + " tail=" + fmt(tail));
  return out;
}

ScatteringMatrix contaminate_diagonal(const ScatteringMatrix& s, double amplitude_rel,
                                      ContaminationMode mode, std::uint64_t seed) {
  s.validate();
  if (s.kind != MatrixKind::full)
    fail(ErrorKind::kind, "contaminate_diagonal needs a full matrix");
  if (!(amplitude_rel >= 0.0) || !std::isfinite(amplitude_rel))
    fail(ErrorKind::config, "contamination amplitude must be >= 0");
  ScatteringMatrix out = s;
  const int n_ant = s.size();
  // One magnitude for every c_n: the largest off-diagonal entry overall.
  double off_max = 0.0;
  for (int n = 0; n < n_ant; ++n)
    for (int m = 0; m < n_ant; ++m)
      if (m != n) off_max = std::max(off_max, std::abs(s.entries(m, n)));
  for (int n = 0; n < n_ant; ++n) {
    double phase = std::numbers::pi / 4.0;
    if (mode == ContaminationMode::random) {
      auto g = entry_engine(seed, kStreamContamination, n, n);
      phase = 2.0 * std::numbers::pi * unit_uniform(g);
    }
    out.entries(n, n) += std::polar(amplitude_rel * off_max, phase);
  }
  out.history.push_back("contaminate_diagonal amplitude_rel=" + fmt(amplitude_rel) + " mode=" +
                        (mode == ContaminationMode::constant ? "constant" : "random") +
                        " seed=" + std::to_string(seed));
  return out;
}

ScatteringMatrix add_noise(const ScatteringMatrix& s, double snr_db, std::uint64_t seed) {
  s.validate();
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    fail(ErrorKind::config, "snr_db must be finite or +infinity");
  if (snr_db == std::numeric_limits<double>::infinity()) return s;

  const int n_ant = s.size();
  const bool skip_diag = s.kind == MatrixKind::zero_diagonal;
  Eigen::MatrixXcd noise = Eigen::MatrixXcd::Zero(n_ant, n_ant);
  double signal_power = 0.0;
  double noise_power = 0.0;
  for (int m = 0; m < n_ant; ++m) {
    for (int n = 0; n < n_ant; ++n) {
      if (skip_diag && m == n) continue;
      auto g = entry_engine(seed, kStreamNoise, m, n);
      noise(m, n) = complex_normal(g);
      signal_power += std::norm(s.entries(m, n));
      noise_power += std::norm(noise(m, n));
    }
  }
  if (signal_power == 0.0) fail(ErrorKind::data, "cannot set an SNR on an all-zero matrix");
  const double target = signal_power / std::pow(10.0, snr_db / 10.0);
  ScatteringMatrix out = s;
  out.entries += std::sqrt(target / noise_power) * noise;
  out.history.push_back("add_noise snr_db=" + fmt(snr_db) + " seed=" + std::to_string(seed));
  return out;
}

ScatteringMatrix subtract(const ScatteringMatrix& total, const ScatteringMatrix& incident) {
  total.validate();
  incident.validate();
  if (total.size() != incident.size())
    fail(ErrorKind::shape, "dimension mismatch: " + std::to_string(total.size()) + " vs " +
                               std::to_string(incident.size()));
  const double scale = std::max(std::abs(total.frequency_hz), std::abs(incident.frequency_hz));
  if (std::abs(total.frequency_hz - incident.frequency_hz) > 1e-12 * scale)
    fail(ErrorKind::shape, "frequency mismatch: " + fmt(total.frequency_hz) + " vs " +
                               fmt(incident.frequency_hz));
  ScatteringMatrix out;
  out.entries = total.entries - incident.entries;
  out.kind = MatrixKind::full;
  out.provenance = Provenance::measured_subtracted;
  out.frequency_hz = total.frequency_hz;
  out.history.push_back("subtract total - incident");
  return out;
}

double sample_snr_db(const ScatteringMatrix& clean, const ScatteringMatrix& noisy) {
  const double p_s = clean.entries.squaredNorm();
  const double p_n = (noisy.entries - clean.entries).squaredNorm();
  return 10.0 * std::log10(p_s / p_n);
}

}  // namespace smig
