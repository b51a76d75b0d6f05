#ifndef CCP_FFT_H_
#define CCP_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ccp {

using Complex = std::complex<double>;

// Unnormalized 1-D discrete Fourier transform of a fixed length.
// Power-of-two lengths use an iterative radix-2 FFT; other lengths fall
// back to a direct O(n^2) sum over a precomputed twiddle table. The plan is
// immutable after construction and can be shared across threads.
class Dft1d {
 public:
  explicit Dft1d(std::size_t n);

  std::size_t size() const { return n_; }

  // In place. `inverse` applies exp(+2 pi i jk / n) and no 1/n scaling.
  // `scratch` must hold at least size() elements and is clobbered.
  void transform(std::span<Complex> data, bool inverse,
                 std::span<Complex> scratch) const;

 private:
  void radix2(std::span<Complex> data, bool inverse) const;
  void direct(std::span<Complex> data, bool inverse,
              std::span<Complex> scratch) const;

  std::size_t n_;
  bool power_of_two_;
  std::vector<Complex> twiddle_;  // exp(-2 pi i k / n), k < n
  std::vector<std::size_t> bit_reverse_;
};

}  // namespace ccp

#endif  // CCP_FFT_H_
