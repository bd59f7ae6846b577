#pragma once

// File formats.
//   S-parameters: "# smig-sparams v1, N=<N>, f_hz=<f>", optional further '#'
//                 lines, a "m,n,re,im" column line, then one row per entry
//                 (1-based indices).
//   Maps:         csv rows x,y,value in row-major order, or binary P5 PGM
//                 normalized by the map maximum with row 0 at y_max. Each map
//                 gets a "<path>.meta" key=value sidecar.
//   Spectrum:     csv rows m,tau,ratio.
// Reals are written as the shortest decimal that reads back exactly.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smig/forward.hpp"
#include "smig/imaging.hpp"

namespace smig {

std::string sparams_to_string(const ScatteringMatrix& s);
ScatteringMatrix sparams_from_string(std::string_view text);

void write_sparams(const ScatteringMatrix& s, const std::filesystem::path& path);
ScatteringMatrix read_sparams(const std::filesystem::path& path);

enum class MapFormat { csv, pgm };

struct MapMetadata {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::string label;  // free text, e.g. "image_diag"
};

/// Writes the map and "<path>.meta".
void write_map(const ImageMap& map, const std::filesystem::path& path, MapFormat format,
               const MapMetadata& meta);

struct MapSample {
  double x;
  double y;
  double value;
};

std::vector<MapSample> read_map_csv(const std::filesystem::path& path);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top
};

GrayImage read_pgm(const std::filesystem::path& path);

void write_spectrum(const SvdResult& svd, const std::filesystem::path& path);

/// Plain text file writer that raises an io error on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace smig
