#pragma once

#include "ctsep/grid.hpp"
#include "ctsep/windows.hpp"

namespace ctsep {

// eta = (j, l, k): scale, orientation, translation. scale == -1 denotes the
// isotropic low-pass channel (l must be 0 there).
struct CurveletIndex {
  int scale = 0;
  int wedge = 0;
  int k1 = 0, k2 = 0;
};

class CurveletCoefs;

// Tight curvelet-style frame on the discrete torus, built entirely in the
// frequency domain. Scale-j atoms occupy the annulus-wedge
// { 2^{j-1} < |xi| < 2^{j+1} } x { angdist(omega, theta_{j,l}) < Delta_j }
// with L_j = 2^{ceil(j/2)} orientations over the full circle; the top scale
// is radially closed at the Nyquist corners so every grid frequency is
// covered. Translations live per wedge on an integer-sheared anisotropic
// lattice sized to the wedge support, which makes the family an exact
// Parseval frame (frame ratio B/A = 1 up to rounding).
class CurveletFrame {
 public:
  CurveletFrame(GridSpec grid, int j0 = 3, int j_top = -1,
                RadialWindow w = RadialWindow());

  const GridSpec& grid() const { return grid_; }
  int j0() const { return j0_; }
  int j_top() const { return j_top_; }
  const RadialWindow& radial_window() const { return w_; }

  static int orientations(int j) { return 1 << ((j + 1) / 2); }
  static double orientation_spacing(int j) {
    return kTwoPi / orientations(j);
  }
  static double orientation_angle(int j, int l) {
    return orientation_spacing(j) * l;
  }

  struct Wedge {
    int j = 0, l = 0;
    double theta = 0;
    int cls = 0;        // 0: columns indexed by xi1; 1: by xi2
    int shear = 0;      // integer shear applied to the cross coordinate
    int m1 = 0, m2 = 0; // lattice dimensions (m1 along the column index)
    std::vector<std::uint32_t> grid_idx;  // flat index into the N^2 spectrum
    std::vector<std::uint32_t> wrap_idx;  // flat index into the m1 x m2 box
    std::vector<float> weight;            // window value (unnormalized)
    double norm_scale = 0;                // 1/sqrt(m1 m2)
    std::size_t lattice_size() const { return std::size_t(m1) * m2; }
  };

  // lazily built per-wedge tables
  const Wedge& wedge(int j, int l) const;
  const Wedge& lowpass() const;  // stored as a pseudo-wedge (cls 0, shear 0)

  // window value (radial x angular, without the 1/sqrt(m1 m2) tight
  // normalization) of wedge (j,l) at an integer frequency
  double wedge_window(int j, int l, int x1, int x2) const;

  // position of the atom on the torus and its orientation
  void atom_position(const CurveletIndex& ix, double& x, double& y) const;

  Spectrum atom(const CurveletIndex& ix) const;

  // analysis over scales [band_lo, band_hi] (clamped to the frame range);
  // include_lowpass adds the low-pass channel block.
  CurveletCoefs analyze(const Spectrum& fhat, int band_lo, int band_hi,
                        bool include_lowpass) const;
  CurveletCoefs analyze(const Spectrum& fhat) const {
    return analyze(fhat, j0_, j_top_, true);
  }
  Spectrum synthesize(const CurveletCoefs& c) const;

  bool valid(const CurveletIndex& ix) const;

 private:
  void build_scale(int j) const;
  void build_lowpass() const;

  GridSpec grid_;
  int j0_, j_top_;
  RadialWindow w_;
  AngularWindow v_;
  // wedges_[j - j0_][l], built on demand
  mutable std::vector<std::vector<Wedge>> wedges_;
  mutable std::vector<bool> scale_built_;
  mutable Wedge lowpass_;
  mutable bool lowpass_built_ = false;
};

// Dense per-wedge coefficient blocks for a scale window of the frame.
class CurveletCoefs {
 public:
  struct Block {
    int scale = 0;  // -1 for lowpass
    int wedge = 0;
    int m1 = 0, m2 = 0;
    std::size_t offset = 0;
  };

  CurveletCoefs() = default;
  CurveletCoefs(const CurveletFrame* frame, int band_lo, int band_hi,
                bool include_lowpass);

  const CurveletFrame& frame() const { return *frame_; }
  int band_lo() const { return band_lo_; }
  int band_hi() const { return band_hi_; }
  bool has_lowpass() const { return lowpass_; }

  const std::vector<Block>& blocks() const { return blocks_; }
  int block_of(int scale, int wedge) const;  // -1 if absent

  std::size_t size() const { return v_.size(); }
  cpx* data() { return v_.data(); }
  const cpx* data() const { return v_.data(); }
  cpx* block_data(int bi) { return v_.data() + blocks_[bi].offset; }
  const cpx* block_data(int bi) const { return v_.data() + blocks_[bi].offset; }

  cpx at(const CurveletIndex& ix) const;

  double l1() const {
    double t = 0;
    for (const auto& z : v_) t += std::abs(z);
    return t;
  }
  double l2_sq() const {
    double t = 0;
    for (const auto& z : v_) t += std::norm(z);
    return t;
  }

 private:
  const CurveletFrame* frame_ = nullptr;
  int band_lo_ = 0, band_hi_ = 0;
  bool lowpass_ = false;
  std::vector<Block> blocks_;
  std::vector<cpx> v_;
  friend class CurveletFrame;
};

// smallest 2^a 3^b 5^c >= n (FFT-friendly size)
int next_fast_size(int n);

}  // namespace ctsep
