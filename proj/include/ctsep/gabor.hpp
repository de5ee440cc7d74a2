#pragma once

#include "ctsep/grid.hpp"
#include "ctsep/windows.hpp"

namespace ctsep {

// lambda = (m, n): spatial position m/(2s) (m per axis in [0, 2s)) and
// modulation s n (n signed, on the integer frequency grid).
struct GaborIndex {
  int m1 = 0, m2 = 0;
  int n1 = 0, n2 = 0;
};

// Coefficients grouped in (2s)^2 blocks, one per modulation n.
class GaborCoefs;

// Tight Gabor frame on the discrete torus. Atom spectra are
// ghat_s(xi - s n) e^{-2 pi i m.xi/(2s)} restricted to the grid's
// fundamental frequency domain; with the modulation window covering the
// whole grid the analysis map scaled by 1/2 is an exact isometry.
class GaborFrame {
 public:
  GaborFrame(GridSpec grid, int s);

  const GridSpec& grid() const { return grid_; }
  int s() const { return s_; }
  int two_s() const { return 2 * s_; }

  // modulation index range per axis (atoms whose support box meets the grid)
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  bool valid(const GaborIndex& ix) const;

  // window spectrum value ghat_s(xi - s n) at integer frequency xi
  double window_value(int xi1, int xi2, int n1, int n2) const;

  // scale applied to atoms so the family is Parseval (analysis isometry)
  double parseval_scale() const { return 0.5; }

  // unnormalized atom (norm ||g||_2 = 1 away from the grid edge)
  Spectrum atom(const GaborIndex& ix) const;

  // full modulation window
  std::vector<std::pair<int, int>> all_modulations() const;
  // modulations whose support box meets the open annulus r_lo < |xi| < r_hi
  std::vector<std::pair<int, int>> band_modulations(double r_lo,
                                                    double r_hi) const;

  // c_lambda = (1/2) <f, atom_lambda>; Parseval: sum |c|^2 = ||f||^2
  GaborCoefs analyze(const Spectrum& fhat,
                     const std::vector<std::pair<int, int>>& ns) const;
  Spectrum synthesize(const GaborCoefs& c) const;

 private:
  GridSpec grid_;
  int s_;
  int n_min_, n_max_;
  GaborWindow1d g1_;
};

class GaborCoefs {
 public:
  GaborCoefs() = default;
  GaborCoefs(int s, std::vector<std::pair<int, int>> ns)
      : s_(s), ns_(std::move(ns)),
        v_(std::size_t(4) * s * s * ns_.size(), cpx(0)) {}

  int s() const { return s_; }
  const std::vector<std::pair<int, int>>& modulations() const { return ns_; }
  std::size_t size() const { return v_.size(); }
  cpx* data() { return v_.data(); }
  const cpx* data() const { return v_.data(); }

  std::size_t block_elems() const { return std::size_t(4) * s_ * s_; }
  cpx* block(std::size_t bi) { return v_.data() + bi * block_elems(); }
  const cpx* block(std::size_t bi) const {
    return v_.data() + bi * block_elems();
  }
  // index of modulation n in the block list, or -1
  int block_of(int n1, int n2) const {
    for (std::size_t i = 0; i < ns_.size(); ++i)
      if (ns_[i].first == n1 && ns_[i].second == n2) return int(i);
    return -1;
  }
  cpx at(const GaborIndex& ix) const {
    const int b = block_of(ix.n1, ix.n2);
    if (b < 0) throw ConfigError("gabor coefficient block not present");
    return block(b)[std::size_t(ix.m1) * 2 * s_ + ix.m2];
  }

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
  int s_ = 0;
  std::vector<std::pair<int, int>> ns_;
  std::vector<cpx> v_;
};

}  // namespace ctsep
