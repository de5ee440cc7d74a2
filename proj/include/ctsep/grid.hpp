#pragma once

#include <cmath>
#include <cstring>
#include <memory>

#include "ctsep/common.hpp"

namespace ctsep {

// Periodic N x N grid on the unit torus [0,1)^2. Frequency indices are
// integers in [-N/2, N/2) per axis, stored in FFT layout (index = xi mod N).
struct GridSpec {
  int n = 0;

  GridSpec() = default;
  explicit GridSpec(int n_) : n(n_) {
    if (n < 8 || (n & (n - 1)) != 0)
      throw ConfigError("grid size must be a power of two >= 8, got " +
                        std::to_string(n));
  }
  std::size_t size() const { return std::size_t(n) * n; }
  int freq_of_index(int i) const { return i < n / 2 ? i : i - n; }
  int index_of_freq(int xi) const { return xi >= 0 ? xi : xi + n; }
  bool operator==(const GridSpec& o) const { return n == o.n; }
  bool operator!=(const GridSpec& o) const { return n != o.n; }
};

enum class Domain : std::uint8_t { Space = 0, Frequency = 1 };

// Complex 2-D sample array over a grid; row-major, first coordinate is the
// row. In Space domain entry (i1,i2) is f(i1/N, i2/N); in Frequency domain
// entry (i1,i2) is the Fourier coefficient at (freq(i1), freq(i2)).
//
// Conventions:
//   fhat(xi) = (1/N^2) sum_x f(x) e^{-2 pi i xi.x}
//   f(x)     = sum_xi fhat(xi) e^{+2 pi i xi.x}
//   <f,g>    = (1/N^2) sum_x f conj(g) = sum_xi fhat conj(ghat)   (Parseval)
class Array2c {
 public:
  Array2c() = default;
  Array2c(GridSpec g, Domain d) : grid_(g), domain_(d), v_(g.size(), cpx(0)) {}

  const GridSpec& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  int n() const { return grid_.n; }
  std::size_t size() const { return v_.size(); }

  cpx* data() { return v_.data(); }
  const cpx* data() const { return v_.data(); }
  cpx& operator[](std::size_t i) { return v_[i]; }
  const cpx& operator[](std::size_t i) const { return v_[i]; }
  cpx& at(int i1, int i2) { return v_[std::size_t(i1) * grid_.n + i2]; }
  const cpx& at(int i1, int i2) const {
    return v_[std::size_t(i1) * grid_.n + i2];
  }
  // frequency-domain accessor by signed frequency pair
  cpx& atf(int xi1, int xi2) {
    return v_[std::size_t(grid_.index_of_freq(xi1)) * grid_.n +
              grid_.index_of_freq(xi2)];
  }
  const cpx& atf(int xi1, int xi2) const {
    return v_[std::size_t(grid_.index_of_freq(xi1)) * grid_.n +
              grid_.index_of_freq(xi2)];
  }

  void fill(cpx z) { std::fill(v_.begin(), v_.end(), z); }

  double norm2_sq() const {
    double s = 0;
    for (const auto& z : v_) s += std::norm(z);
    if (domain_ == Domain::Space) s /= double(grid_.size());
    return s;
  }
  double norm2() const { return std::sqrt(norm2_sq()); }

  Array2c& operator+=(const Array2c& o) {
    check_same(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Array2c& operator-=(const Array2c& o) {
    check_same(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Array2c& operator*=(cpx a) {
    for (auto& z : v_) z *= a;
    return *this;
  }

 private:
  void check_same(const Array2c& o) const {
    if (grid_ != o.grid_ || domain_ != o.domain_)
      throw ConfigError("grid/domain mismatch in field arithmetic");
  }
  GridSpec grid_;
  Domain domain_ = Domain::Space;
  std::vector<cpx> v_;
};

using Field = Array2c;     // Domain::Space
using Spectrum = Array2c;  // Domain::Frequency

// FFT bridge (FFTW, FFTW_ESTIMATE plans only so results are reproducible
// run to run; plan creation is serialized internally).
Spectrum fft(const Field& f);
Field ifft(const Spectrum& s);

// Unnormalized c2c transforms on an m1 x m2 row-major buffer, in place.
// sign -1: sum_x v(x) e^{-2 pi i k.x/M},  sign +1: e^{+2 pi i k.x/M}.
void fft2_raw(cpx* data, int m1, int m2, int sign);

inline double inner_real(const Array2c& a, const Array2c& b) {
  // Re<a,b> with the domain-appropriate normalization
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  if (a.domain() == Domain::Space) s /= double(a.grid().size());
  return s;
}

inline cpx inner(const Array2c& a, const Array2c& b) {
  cpx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  if (a.domain() == Domain::Space) s /= double(a.grid().size());
  return s;
}

Field random_field(GridSpec g, Rng& rng, bool real_valued = false);

}  // namespace ctsep
