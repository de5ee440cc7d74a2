#include "ctsep/filters.hpp"

namespace ctsep {

FilterBank::FilterBank(GridSpec grid, int j_lo, int j_hi, RadialWindow w)
    : grid_(grid), j_lo_(j_lo), j_hi_(j_hi), w_(w) {
  if (j_lo < 1 || j_hi < j_lo)
    throw ConfigError("filter bank scale range invalid");
  if ((1 << (j_hi + 1)) > grid.n)
    throw ConfigError("filter bank top scale does not fit the grid");

  const int n = grid_.n;
  bands_.reserve(j_hi - j_lo + 1);
  for (int j = j_lo_; j <= j_hi_; ++j)
    bands_.emplace_back(grid_, Domain::Frequency);
  lowpass_ = Spectrum(grid_, Domain::Frequency);
  highpass_ = Spectrum(grid_, Domain::Frequency);

  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = grid_.freq_of_index(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = grid_.freq_of_index(i2);
      const double r = std::hypot(x1, x2);
      double sum_sq = 0.0;
      for (int j = j_lo_; j <= j_hi_; ++j) {
        const double v = w_(r / double(1 << j));
        bands_[j - j_lo_].at(i1, i2) = v;
        sum_sq += v * v;
      }
      // Remainders take the exact partition deficit. Frequencies below the
      // band go to the low-pass piece, the rest (Nyquist corners and
      // anything above 2^{j_hi+1}) to the high-pass piece.
      const double deficit = std::max(0.0, 1.0 - sum_sq);
      const double rem = std::sqrt(deficit);
      if (r < double(1 << j_lo_))
        lowpass_.at(i1, i2) = rem;
      else
        highpass_.at(i1, i2) = rem;
    }
  }
}

void FilterBank::check_band(int j) const {
  if (j < j_lo_ || j > j_hi_)
    throw ConfigError("filter band " + std::to_string(j) +
                      " outside range [" + std::to_string(j_lo_) + "," +
                      std::to_string(j_hi_) + "]");
}

const Spectrum& FilterBank::bandpass_spectrum(int j) const {
  check_band(j);
  return bands_[j - j_lo_];
}

Spectrum FilterBank::filter_band(const Spectrum& fhat, int j) const {
  check_band(j);
  if (fhat.grid() != grid_) throw ConfigError("filter_band: grid mismatch");
  Spectrum out(grid_, Domain::Frequency);
  const Spectrum& t = bands_[j - j_lo_];
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fhat[i] * t[i].real();
  return out;
}

FilterBank::Pieces FilterBank::decompose(const Field& f) const {
  if (f.grid() != grid_) throw ConfigError("decompose: grid mismatch");
  Spectrum fhat = fft(f);
  Pieces p;
  p.bands.reserve(bands_.size());
  for (int j = j_lo_; j <= j_hi_; ++j)
    p.bands.push_back(ifft(filter_band(fhat, j)));
  Spectrum lo(grid_, Domain::Frequency), hi(grid_, Domain::Frequency);
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    lo[i] = fhat[i] * lowpass_[i].real();
    hi[i] = fhat[i] * highpass_[i].real();
  }
  p.lowpass = ifft(lo);
  p.highpass = ifft(hi);
  return p;
}

Field FilterBank::reconstruct(const Pieces& pieces) const {
  if (int(pieces.bands.size()) != j_hi_ - j_lo_ + 1)
    throw ConfigError("reconstruct: piece count mismatch");
  Spectrum acc(grid_, Domain::Frequency);
  for (int j = j_lo_; j <= j_hi_; ++j) {
    const Field& b = pieces.bands[j - j_lo_];
    if (b.grid() != grid_) throw ConfigError("reconstruct: grid mismatch");
    Spectrum bh = fft(b);
    const Spectrum& t = bands_[j - j_lo_];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += bh[i] * t[i].real();
  }
  Spectrum lh = fft(pieces.lowpass);
  Spectrum hh = fft(pieces.highpass);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] += lh[i] * lowpass_[i].real();
    acc[i] += hh[i] * highpass_[i].real();
  }
  return ifft(acc);
}

double FilterBank::partition_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < lowpass_.size(); ++i) {
    double s = sq(lowpass_[i].real()) + sq(highpass_[i].real());
    for (const auto& b : bands_) s += sq(b[i].real());
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace ctsep
