#include "smig/pipeline.hpp"

#include "smig/error.hpp"

namespace smig {

ScatteringMatrix synthesize(const RunConfig& c) {
  const auto medium = medium_of(c);
  const auto array = array_of(c);
  const auto anomalies = anomalies_of(c);
  ScatteringMatrix s;
  if (c.generator == Generator::born) {
    s = born_smatrix(array, anomalies, medium, c.contrast);
  } else {
    if (anomalies.size() != 1)
      throw Error(ErrorKind::config, "pipeline", "exact_disc generator takes exactly one anomaly");
    s = exact_disc_smatrix(array, anomalies.front(), medium,
                           specfun::SeriesTruncation{c.series_margin, c.series_tol}, c.contrast);
  }
  if (c.contamination > 0.0) s = contaminate_diagonal(s, c.contamination, c.contamination_mode, c.seed);
  if (c.snr_db != std::numeric_limits<double>::infinity()) s = add_noise(s, c.snr_db, c.seed);
  return s;
}

ImagingRun run_imaging(const RunConfig& c, const ScatteringMatrix& input) {
  const auto array = array_of(c);
  const auto k = steering_k(c);
  ImagingRun run;
  if (c.kind == MatrixKind::zero_diagonal) {
    const auto d = zero_diagonal(input);
    run.svd = svd(d);
    run.map = image_diag(d, c.grid, array, k, c.steering);
  } else {
    if (input.kind != MatrixKind::full)
      throw Error(ErrorKind::kind, "pipeline", "full-matrix imaging needs a full matrix");
    run.svd = svd(input);
    run.map = image_full(input, c.grid, array, k, c.rank, c.steering);
  }
  run.peak = argmax(run.map);
  run.width = fwhm(run.map, run.peak);
  return run;
}

ValidationRun run_validation(const RunConfig& c) {
  const auto array = array_of(c);
  ValidationRun run;
  run.k_real = lossless_wavenumber(medium_of(c));
  const Vec2 r_star(c.anomalies.front().center_x, c.anomalies.front().center_y);
  const specfun::SeriesTruncation trunc{c.structure_s_max, 1e-10};
  std::vector<Vec2> pts;
  const int n = c.structure_lattice;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      pts.emplace_back(c.grid.x_min + (c.grid.x_max - c.grid.x_min) * ix / (n - 1),
                       c.grid.y_min + (c.grid.y_max - c.grid.y_min) * iy / (n - 1));
  run.identity = validate_diag_identity(pts, array, run.k_real, r_star, trunc);
  run.image_ratio = image_structure_ratio(pts, array, run.k_real, r_star, trunc);
  run.bilinear_ratio = bilinear_structure_ratio(pts, array, run.k_real, r_star, trunc);
  return run;
}

}  // namespace smig
