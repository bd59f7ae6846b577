#pragma once

// Config-driven composition of the modules, shared by the CLI and tests.

#include "smig/config.hpp"
#include "smig/imaging.hpp"
#include "smig/structure.hpp"

namespace smig {

/// Generator, then diagonal contamination, then noise, as configured.
ScatteringMatrix synthesize(const RunConfig& config);

struct ImagingRun {
  ImageMap map;
  SvdResult svd;  // of the matrix actually imaged
  Peak peak;
  Fwhm width;
};

/// Zeroes the diagonal first when the configured kind is zero_diagonal.
ImagingRun run_imaging(const RunConfig& config, const ScatteringMatrix& s);

struct ValidationRun {
  double k_real = 0.0;
  DiagIdentityReport identity;
  RatioReport image_ratio;
  RatioReport bilinear_ratio;
};

/// Structure checks on a structure.lattice^2 lattice over the grid bounds,
/// centered on anomaly 1, with the lossless wavenumber.
ValidationRun run_validation(const RunConfig& config);

}  // namespace smig
