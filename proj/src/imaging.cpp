#include "smig/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/SVD>

#include "smig/error.hpp"
#include "smig/specfun.hpp"

namespace smig {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, "imaging", msg);
}

int grid_count(double lo, double hi, double step) {
  // Tolerate bounds that are a whole number of steps apart up to rounding.
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

template <typename F>
void parallel_rows(int rows, F&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::min<int>(static_cast<int>(hw), rows);
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < rows; r += workers) body(r);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ImageMap evaluate(const SubspaceImager& imager, const ImagingGrid& grid, const AntennaArray& array,
                  const ScatteringMatrix& s) {
  grid.validate();
  ImageMap map;
  map.grid = grid;
  map.nx = grid.nx();
  map.ny = grid.ny();
  map.values.assign(static_cast<std::size_t>(map.nx) * map.ny, 0.0);
  map.rank = imager.rank();
  map.frequency_hz = s.frequency_hz;
  map.kind = s.kind;

  std::vector<int> excluded(static_cast<std::size_t>(map.ny), 0);
  parallel_rows(map.ny, [&](int iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const Vec2 r = map.point(ix, iy);
      bool near_antenna = false;
      for (const auto& d : array.positions())
        if ((d - r).norm() < kAntennaExclusion) near_antenna = true;
      if (near_antenna) {
        ++excluded[static_cast<std::size_t>(iy)];
        continue;
      }
      map.values[static_cast<std::size_t>(iy) * map.nx + ix] = imager.value(r);
    }
  });
  for (int e : excluded) map.excluded_points += e;
  return map;
}

}  // namespace

SvdResult svd(const ScatteringMatrix& s) {
  if (s.entries.rows() != s.entries.cols()) fail(ErrorKind::shape, "matrix must be square");
  for (Eigen::Index j = 0; j < s.entries.cols(); ++j)
    for (Eigen::Index i = 0; i < s.entries.rows(); ++i)
      if (!std::isfinite(s.entries(i, j).real()) || !std::isfinite(s.entries(i, j).imag()))
        fail(ErrorKind::data, "non-finite entry at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
  Eigen::JacobiSVD<Eigen::MatrixXcd> dec(s.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

void RankPolicy::validate(int n) const {
  if (mode == Mode::relative_threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
      fail(ErrorKind::config, "rank threshold must lie in (0, 1)");
  } else if (fixed_m < 1 || fixed_m > n) {
    fail(ErrorKind::config, "fixed rank must lie in [1, " + std::to_string(n) + "]");
  }
}

int select_rank(const SvdResult& svd, const RankPolicy& policy) {
  const int n = static_cast<int>(svd.tau.size());
  policy.validate(n);
  if (n == 0 || !(svd.tau(0) > 0.0)) fail(ErrorKind::rank, "all singular values are zero");
  if (policy.mode == RankPolicy::Mode::fixed) return policy.fixed_m;
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (svd.tau(i) >= policy.threshold * svd.tau(0)) ++m;
  return std::max(m, 1);
}

void ImagingGrid::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorKind::config, "grid step must be > 0");
  if (!(x_max >= x_min) || !(y_max >= y_min)) fail(ErrorKind::config, "grid bounds must be ordered");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max))
    fail(ErrorKind::config, "grid bounds must be finite");
  if ((x_max - x_min) / step > 1e5 || (y_max - y_min) / step > 1e5)
    fail(ErrorKind::config, "grid has more than 1e5 points per axis");
}

int ImagingGrid::nx() const { return grid_count(x_min, x_max, step); }
int ImagingGrid::ny() const { return grid_count(y_min, y_max, step); }

Eigen::VectorXcd test_vector(const Vec2& r, const AntennaArray& array, const ComplexWavenumber& k,
                             SteeringModel model) {
  const int n = array.count();
  Eigen::VectorXcd w(n);
  if (model == SteeringModel::hankel) {
    for (int i = 0; i < n; ++i) w(i) = incident_field(array.position(i), r, k);
  } else {
    const double kr = k.k.real();
    for (int i = 0; i < n; ++i)
      w(i) = std::exp(cplx{0.0, -kr * array.direction(i).dot(r)});
  }
  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::data, "test vector has zero norm");
  return w / norm;
}

ScatteringMatrix zero_diagonal(const ScatteringMatrix& s) {
  if (s.entries.rows() != s.entries.cols()) fail(ErrorKind::shape, "matrix must be square");
  ScatteringMatrix out = s;
  out.entries.diagonal().setZero();
  out.kind = MatrixKind::zero_diagonal;
  out.history.push_back("zero_diagonal");
  return out;
}

SubspaceImager::SubspaceImager(const SvdResult& svd, int rank, const AntennaArray& array,
                               const ComplexWavenumber& k, SteeringModel model)
    : rank_(rank), array_(&array), k_(k), model_(model) {
  if (svd.u.rows() != array.count())
    fail(ErrorKind::shape, "matrix size " + std::to_string(svd.u.rows()) +
                               " does not match antenna count " + std::to_string(array.count()));
  if (rank < 1 || rank > svd.u.cols()) fail(ErrorKind::rank, "rank out of range");
  u_ = svd.u.leftCols(rank);
  v_conj_ = svd.v.leftCols(rank).conjugate();
}

double SubspaceImager::value(const Vec2& r) const {
  const Eigen::VectorXcd w = test_vector(r, *array_, k_, model_);
  // <W, X> = W^H X for every column at once
  const Eigen::RowVectorXcd pu = w.adjoint() * u_;
  const Eigen::RowVectorXcd pv = w.adjoint() * v_conj_;
  return std::abs(pu.cwiseProduct(pv).sum());
}

ImageMap image_full(const ScatteringMatrix& s, const ImagingGrid& grid, const AntennaArray& array,
                    const ComplexWavenumber& k, const RankPolicy& policy, SteeringModel model) {
  s.validate();
  if (s.kind != MatrixKind::full) fail(ErrorKind::kind, "image_full needs a full matrix");
  const SvdResult dec = svd(s);
  const int m = select_rank(dec, policy);
  return evaluate(SubspaceImager(dec, m, array, k, model), grid, array, s);
}

ImageMap image_diag(const ScatteringMatrix& s, const ImagingGrid& grid, const AntennaArray& array,
                    const ComplexWavenumber& k, SteeringModel model) {
  s.validate();
  if (s.kind != MatrixKind::zero_diagonal)
    fail(ErrorKind::kind, "image_diag needs a zero_diagonal matrix");
  const SvdResult dec = svd(s);
  if (!(dec.tau(0) > 0.0)) fail(ErrorKind::rank, "all singular values are zero");
  return evaluate(SubspaceImager(dec, 1, array, k, model), grid, array, s);
}

Peak argmax(const ImageMap& map) {
  if (map.values.empty()) fail(ErrorKind::data, "empty map");
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.values.size(); ++i)
    if (map.values[i] > map.values[best]) best = i;
  Peak p;
  p.ix = static_cast<int>(best % static_cast<std::size_t>(map.nx));
  p.iy = static_cast<int>(best / static_cast<std::size_t>(map.nx));
  p.location = map.point(p.ix, p.iy);
  p.value = map.values[best];
  return p;
}

Fwhm fwhm(const ImageMap& map, const Peak& peak) {
  const double half = 0.5 * map.at(peak.ix, peak.iy);
  Fwhm out;
  // Distance from the peak to the half-max crossing walking in direction
  // (dx, dy), in grid steps.
  auto reach = [&](int dx, int dy) {
    int ix = peak.ix;
    int iy = peak.iy;
    double prev = map.at(ix, iy);
    int steps = 0;
    for (;;) {
      const int jx = ix + dx;
      const int jy = iy + dy;
      if (jx < 0 || jy < 0 || jx >= map.nx || jy >= map.ny) {
        out.touches_boundary = true;
        return static_cast<double>(steps);
      }
      const double cur = map.at(jx, jy);
      if (cur < half) return steps + (prev - half) / (prev - cur);
      prev = cur;
      ix = jx;
      iy = jy;
      ++steps;
    }
  };
  const double step = map.grid.step;
  out.width_x = (reach(-1, 0) + reach(1, 0)) * step;
  out.width_y = (reach(0, -1) + reach(0, 1)) * step;
  out.width = 0.5 * (out.width_x + out.width_y);
  return out;
}

}  // namespace smig
