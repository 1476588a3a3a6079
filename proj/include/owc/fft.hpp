#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "owc/types.hpp"

namespace owc {

/// Iterative radix-2 transform of a fixed power-of-two size.
///
/// forward(x)[k]          = (1/N) sum_n x[n] e^{-j 2 pi n k / N}
/// inverse_unscaled(x)[n] =       sum_k x[k] e^{+j 2 pi n k / N}
class FourierPlan {
 public:
  explicit FourierPlan(std::size_t n) : n_(n), twiddle_(n / 2), rev_(n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("FourierPlan: size must be a power of two");
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      twiddle_[i] = cplx(std::cos(a), std::sin(a));
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::vector<cplx>& x) const {
    transform(x, false);
    const double s = 1.0 / static_cast<double>(n_);
    for (auto& v : x) v *= s;
  }

  void inverse_unscaled(std::vector<cplx>& x) const { transform(x, true); }

 private:
  void transform(std::vector<cplx>& x, bool inverse) const {
    if (x.size() != n_) throw std::invalid_argument("FourierPlan: length mismatch");
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(x[i], x[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2, step = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cplx w = twiddle_[j * step];
          if (inverse) w = std::conj(w);
          const cplx u = x[start + j];
          const cplx v = x[start + j + half] * w;
          x[start + j] = u + v;
          x[start + j + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<cplx> twiddle_;
  std::vector<std::size_t> rev_;
};

}  // namespace owc
