#include "ccp/fft.h"

#include <cassert>
#include <cmath>
#include <numbers>

namespace ccp {

Dft1d::Dft1d(std::size_t n)
    : n_(n), power_of_two_(n > 0 && (n & (n - 1)) == 0), twiddle_(n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
  if (power_of_two_) {
    bit_reverse_.resize(n);
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bit_reverse_[i] = r;
    }
  }
}

void Dft1d::transform(std::span<Complex> data, bool inverse,
                      std::span<Complex> scratch) const {
  assert(data.size() == n_);
  if (n_ <= 1) return;
  if (power_of_two_) {
    radix2(data, inverse);
  } else {
    direct(data, inverse, scratch);
  }
}

void Dft1d::radix2(std::span<Complex> data, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bit_reverse_[i];
    if (i < r) std::swap(data[i], data[r]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex a = data[start + k];
        const Complex b = data[start + k + half] * w;
        data[start + k] = a + b;
        data[start + k + half] = a - b;
      }
    }
  }
}

void Dft1d::direct(std::span<Complex> data, bool inverse,
                   std::span<Complex> scratch) const {
  assert(scratch.size() >= n_);
  for (std::size_t k = 0; k < n_; ++k) {
    Complex acc = 0.0;
    std::size_t idx = 0;  // (j * k) mod n, kept incrementally
    for (std::size_t j = 0; j < n_; ++j) {
      const Complex w = inverse ? std::conj(twiddle_[idx]) : twiddle_[idx];
      acc += data[j] * w;
      idx += k;
      if (idx >= n_) idx -= n_;
    }
    scratch[k] = acc;
  }
  for (std::size_t k = 0; k < n_; ++k) data[k] = scratch[k];
}

}  // namespace ccp
