#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace owc {

inline constexpr std::string_view kVersion = "1.0.0";

using cplx = std::complex<double>;

/// Optical OFDM variant.
enum class Scheme { DCO, ACO };

inline std::string_view to_string(Scheme s) {
  return s == Scheme::DCO ? "DCO" : "ACO";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "DCO" || name == "dco") return Scheme::DCO;
  if (name == "ACO" || name == "aco") return Scheme::ACO;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected DCO or ACO)");
}

/// Logarithm used by the achievable-rate objective.
enum class LogBase { Natural, Binary };

inline std::string_view to_string(LogBase b) {
  return b == LogBase::Natural ? "natural" : "binary";
}

inline LogBase parse_log_base(std::string_view name) {
  if (name == "natural" || name == "e" || name == "ln") return LogBase::Natural;
  if (name == "binary" || name == "2" || name == "log2") return LogBase::Binary;
  throw std::invalid_argument("unknown log base '" + std::string(name) + "'");
}

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace owc
