#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "owc/types.hpp"

namespace owc {

/// Measured blue-LED link gains of subcarriers 0..31 (64-subcarrier system),
/// in units of 1e-8.
inline constexpr std::array<std::array<double, 2>, 32> kTable1GainsRaw{{
    {1.357, 0.000},  {1.353, -0.047}, {1.341, -0.093}, {1.323, -0.135},
    {1.298, -0.173}, {1.269, -0.205}, {1.237, -0.231}, {1.203, -0.252},
    {1.168, -0.267}, {1.133, -0.277}, {1.099, -0.282}, {1.067, -0.283},
    {1.036, -0.280}, {1.008, -0.275}, {0.981, -0.267}, {0.957, -0.257},
    {0.935, -0.246}, {0.915, -0.234}, {0.897, -0.220}, {0.881, -0.206},
    {0.866, -0.191}, {0.853, -0.176}, {0.842, -0.161}, {0.832, -0.145},
    {0.823, -0.129}, {0.815, -0.113}, {0.809, -0.097}, {0.804, -0.081},
    {0.799, -0.065}, {0.796, -0.049}, {0.794, -0.032}, {0.792, -0.016},
}};

inline constexpr double kTable1Scale = 1e-8;

/// Extends gains of subcarriers 0..N/2-1 to all N subcarriers with
/// g[N-k] = conj(g[k]). The Nyquist bin, which has no measured value and must
/// be real, takes |g[N/2-1]|.
inline std::vector<cplx> hermitian_extend(const std::vector<cplx>& half) {
  const std::size_t n = 2 * half.size();
  if (!is_power_of_two(n) || n < 4)
    throw std::invalid_argument("gain table must hold N/2 entries for a power-of-two N >= 4");
  if (half[0].imag() != 0.0 || half[0].real() <= 0.0)
    throw std::invalid_argument("DC gain g_0 must be real and positive");
  std::vector<cplx> g(n);
  for (std::size_t k = 0; k < half.size(); ++k) g[k] = half[k];
  g[n / 2] = cplx(std::abs(half.back()), 0.0);
  for (std::size_t k = 1; k < n / 2; ++k) g[n - k] = std::conj(half[k]);
  return g;
}

inline std::vector<cplx> table1_gains() {
  std::vector<cplx> half;
  half.reserve(kTable1GainsRaw.size());
  for (const auto& [re, im] : kTable1GainsRaw)
    half.emplace_back(re * kTable1Scale, im * kTable1Scale);
  return hermitian_extend(half);
}

/// Reads a gain table: '#' comments, a `scale <factor>` line, then one
/// `<real> <imag>` row per subcarrier 0..N/2-1. Returns the full N-entry
/// Hermitian gain vector.
inline std::vector<cplx> read_gain_table(std::istream& in) {
  std::vector<cplx> half;
  double scale = 0.0;
  bool have_scale = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    if (!have_scale) {
      std::string key;
      row >> key >> scale;
      if (key != "scale" || !row || !(scale > 0.0))
        throw std::runtime_error("gain table line " + std::to_string(lineno) +
                                 ": expected 'scale <positive factor>'");
      have_scale = true;
      continue;
    }
    double re = 0.0, im = 0.0;
    if (!(row >> re >> im))
      throw std::runtime_error("gain table line " + std::to_string(lineno) +
                               ": expected '<real> <imag>'");
    half.emplace_back(re * scale, im * scale);
  }
  if (!have_scale) throw std::runtime_error("gain table: missing scale header");
  return hermitian_extend(half);
}

inline std::vector<cplx> read_gain_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gain table '" + path + "'");
  return read_gain_table(in);
}

}  // namespace owc
