#pragma once

#include "ctsep/grid.hpp"
#include "ctsep/windows.hpp"

namespace ctsep {

// Subband filter bank with transfer spectra Fhat_j(xi) = W(|xi|/2^j) for
// j in [j_lo, j_hi], plus a low-pass remainder below 2^{j_lo} and a
// high-pass remainder above 2^{j_hi} so that the squared transfers sum to
// one at every grid frequency.
class FilterBank {
 public:
  FilterBank(GridSpec grid, int j_lo, int j_hi,
             RadialWindow w = RadialWindow());

  const GridSpec& grid() const { return grid_; }
  int j_lo() const { return j_lo_; }
  int j_hi() const { return j_hi_; }

  // transfer spectrum of band j (throws if j out of range)
  const Spectrum& bandpass_spectrum(int j) const;
  const Spectrum& lowpass_spectrum() const { return lowpass_; }
  const Spectrum& highpass_spectrum() const { return highpass_; }

  struct Pieces {
    std::vector<Field> bands;  // j = j_lo .. j_hi
    Field lowpass;
    Field highpass;
  };

  Pieces decompose(const Field& f) const;
  Field reconstruct(const Pieces& pieces) const;

  // single band: f_j = F_j * f, returned in the frequency domain
  Spectrum filter_band(const Spectrum& fhat, int j) const;

  // max over grid frequencies of |sum_j F_j^2 + lp^2 + hp^2 - 1|
  double partition_defect() const;

 private:
  void check_band(int j) const;
  GridSpec grid_;
  int j_lo_, j_hi_;
  RadialWindow w_;
  std::vector<Spectrum> bands_;
  Spectrum lowpass_, highpass_;
};

}  // namespace ctsep
