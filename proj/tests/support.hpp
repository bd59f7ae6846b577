#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smig/em_model.hpp"
#include "smig/forward.hpp"

namespace smig::test {

inline MediumParams reference_medium(double f_hz = 1.0e9) {
  return MediumParams::from_relative(20.0, 0.2, f_hz);
}

inline Anomaly small_anomaly() { return Anomaly{}; }

inline ScatteringMatrix reference_born(double f_hz = 1.0e9) {
  const auto a = small_anomaly();
  return born_smatrix(antenna_array(16, 0.09), std::span<const Anomaly>(&a, 1), reference_medium(f_hz));
}

inline Vec2 random_point(std::mt19937_64& g, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(g), u(g)};
}

inline double rel_err(cplx got, cplx ref) { return std::abs(got - ref) / std::abs(ref); }

struct OracleRow {
  std::string set;
  std::string func;
  int order;
  cplx z;
  cplx ref;
};

inline std::vector<OracleRow> bessel_oracle() {
  std::ifstream f(std::string(SMIG_TEST_DATA_DIR) + "/bessel_oracle.csv");
  std::vector<OracleRow> rows;
  std::string line;
  std::getline(f, line);
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string cell[7];
    for (auto& c : cell) std::getline(ss, c, ',');
    rows.push_back({cell[0], cell[1], std::stoi(cell[2]), {std::stod(cell[3]), std::stod(cell[4])},
                    {std::stod(cell[5]), std::stod(cell[6])}});
  }
  return rows;
}

}  // namespace smig::test
