#include "ctsep/curvelet.hpp"

#include <algorithm>
#include <cmath>

namespace ctsep {

int next_fast_size(int n) {
  if (n < 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    while (r % 5 == 0) r /= 5;
    if (r == 1) return m;
  }
}

CurveletFrame::CurveletFrame(GridSpec grid, int j0, int j_top, RadialWindow w)
    : grid_(grid), j0_(j0), j_top_(j_top), w_(w) {
  int p = 0;
  while ((1 << p) < grid_.n) ++p;
  if (j_top_ < 0) j_top_ = p - 1;
  if (j0_ < 1 || j0_ > j_top_ || j_top_ > p - 1)
    throw ConfigError("curvelet frame scale range invalid for grid");
  wedges_.resize(j_top_ - j0_ + 1);
  scale_built_.assign(j_top_ - j0_ + 1, false);
}

void CurveletFrame::build_scale(int j) const {
  const int n = grid_.n;
  const int half = n / 2;
  const int L = orientations(j);
  const double spacing = orientation_spacing(j);
  auto& row = wedges_[j - j0_];
  row.resize(L);
  for (int l = 0; l < L; ++l) {
    Wedge& w = row[l];
    w.j = j;
    w.l = l;
    w.theta = spacing * l;
    const double c = std::cos(w.theta), s = std::sin(w.theta);
    w.cls = std::abs(c) >= std::abs(s) ? 0 : 1;
    const double sigma = w.cls == 0 ? s / c : c / s;
    w.shear = int(std::lround(sigma));
  }

  const bool top = (j == j_top_);
  const int bound = top ? half : std::min(half, 2 << j);
  const double inv2j = 1.0 / double(1 << j);

  struct RawEntry {
    int x1, x2;
    double val;
  };
  std::vector<std::vector<RawEntry>> raw(L);

  for (int x1 = -bound; x1 < bound; ++x1) {
    for (int x2 = -bound; x2 < bound; ++x2) {
      if (x1 == 0 && x2 == 0) continue;
      const double r = std::hypot(double(x1), double(x2));
      const double t = r * inv2j;
      double radial;
      if (top && t >= 1.0)
        radial = 1.0;  // radially closed top scale
      else
        radial = w_(t);
      if (radial == 0.0) continue;
      const double omega = std::atan2(double(x2), double(x1));
      const int l0 = int(std::lround(omega / spacing));
      for (int dl = -1; dl <= 1; ++dl) {
        const int l = ((l0 + dl) % L + L) % L;
        const double d = circ_dist(omega, row[l].theta, kTwoPi);
        const double ang = v_(d / spacing);
        if (ang == 0.0) continue;
        raw[l].push_back({x1, x2, radial * ang});
      }
    }
  }

  for (int l = 0; l < L; ++l) {
    Wedge& w = row[l];
    auto& entries = raw[l];
    if (entries.empty())
      throw NumericError("curvelet wedge with empty support");
    int u_min = 1 << 30, u_max = -(1 << 30);
    int d_min = 1 << 30, d_max = -(1 << 30);
    for (const auto& e : entries) {
      const int u = w.cls == 0 ? e.x1 : e.x2;
      const int v = w.cls == 0 ? e.x2 : e.x1;
      const int d = v - w.shear * u;
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
      d_min = std::min(d_min, d);
      d_max = std::max(d_max, d);
    }
    w.m1 = next_fast_size(u_max - u_min + 1);
    w.m2 = next_fast_size(d_max - d_min + 1);
    w.norm_scale = 1.0 / std::sqrt(double(w.m1) * w.m2);
    w.grid_idx.reserve(entries.size());
    w.wrap_idx.reserve(entries.size());
    w.weight.reserve(entries.size());
    for (const auto& e : entries) {
      const int u = w.cls == 0 ? e.x1 : e.x2;
      const int v = w.cls == 0 ? e.x2 : e.x1;
      const int d = v - w.shear * u;
      const int uu = ((u % w.m1) + w.m1) % w.m1;
      const int dd = ((d % w.m2) + w.m2) % w.m2;
      w.grid_idx.push_back(std::uint32_t(grid_.index_of_freq(e.x1)) * n +
                           grid_.index_of_freq(e.x2));
      w.wrap_idx.push_back(std::uint32_t(uu) * w.m2 + dd);
      w.weight.push_back(float(e.val));
    }
  }
  scale_built_[j - j0_] = true;
}

void CurveletFrame::build_lowpass() const {
  const int n = grid_.n;
  Wedge& w = lowpass_;
  w.j = -1;
  w.l = 0;
  w.cls = 0;
  w.shear = 0;
  const int r_lo = 1 << j0_;
  w.m1 = w.m2 = next_fast_size(2 * r_lo - 1);
  w.norm_scale = 1.0 / std::sqrt(double(w.m1) * w.m2);
  for (int x1 = -r_lo + 1; x1 < r_lo; ++x1) {
    for (int x2 = -r_lo + 1; x2 < r_lo; ++x2) {
      const double r = std::hypot(double(x1), double(x2));
      double sum = 0.0;
      for (int j = j0_; j <= j_top_; ++j) {
        const double t = r / double(1 << j);
        const double radial = (j == j_top_ && t >= 1.0) ? 1.0 : w_(t);
        sum += radial * radial;
      }
      double deficit = 1.0 - sum;
      if (deficit < 1e-14) continue;
      const int uu = ((x1 % w.m1) + w.m1) % w.m1;
      const int dd = ((x2 % w.m2) + w.m2) % w.m2;
      w.grid_idx.push_back(std::uint32_t(grid_.index_of_freq(x1)) * n +
                           grid_.index_of_freq(x2));
      w.wrap_idx.push_back(std::uint32_t(uu) * w.m2 + dd);
      w.weight.push_back(float(std::sqrt(deficit)));
    }
  }
  lowpass_built_ = true;
}

const CurveletFrame::Wedge& CurveletFrame::wedge(int j, int l) const {
  if (j < j0_ || j > j_top_)
    throw ConfigError("curvelet scale out of range");
  if (!scale_built_[j - j0_]) build_scale(j);
  const auto& row = wedges_[j - j0_];
  if (l < 0 || l >= int(row.size()))
    throw ConfigError("curvelet orientation out of range");
  return row[l];
}

const CurveletFrame::Wedge& CurveletFrame::lowpass() const {
  if (!lowpass_built_) build_lowpass();
  return lowpass_;
}

double CurveletFrame::wedge_window(int j, int l, int x1, int x2) const {
  if (x1 == 0 && x2 == 0) return 0.0;
  const double r = std::hypot(double(x1), double(x2));
  const double t = r / double(1 << j);
  const double radial = (j == j_top_ && t >= 1.0) ? 1.0 : w_(t);
  if (radial == 0.0) return 0.0;
  const double omega = std::atan2(double(x2), double(x1));
  const double spacing = orientation_spacing(j);
  const double d = circ_dist(omega, orientation_angle(j, l), kTwoPi);
  const double ang = v_(d / spacing);
  return radial * ang;
}

bool CurveletFrame::valid(const CurveletIndex& ix) const {
  if (ix.scale == -1) {
    const Wedge& w = lowpass();
    return ix.wedge == 0 && ix.k1 >= 0 && ix.k1 < w.m1 && ix.k2 >= 0 &&
           ix.k2 < w.m2;
  }
  if (ix.scale < j0_ || ix.scale > j_top_) return false;
  if (ix.wedge < 0 || ix.wedge >= orientations(ix.scale)) return false;
  const Wedge& w = wedge(ix.scale, ix.wedge);
  return ix.k1 >= 0 && ix.k1 < w.m1 && ix.k2 >= 0 && ix.k2 < w.m2;
}

void CurveletFrame::atom_position(const CurveletIndex& ix, double& x,
                                  double& y) const {
  const Wedge& w = ix.scale == -1 ? lowpass() : wedge(ix.scale, ix.wedge);
  double xu = double(ix.k1) / w.m1 - double(w.shear) * ix.k2 / w.m2;
  double xv = double(ix.k2) / w.m2;
  xu -= std::floor(xu);
  xv -= std::floor(xv);
  if (w.cls == 0) {
    x = xu;
    y = xv;
  } else {
    x = xv;
    y = xu;
  }
}

Spectrum CurveletFrame::atom(const CurveletIndex& ix) const {
  if (!valid(ix)) throw ConfigError("curvelet index out of range");
  const Wedge& w = ix.scale == -1 ? lowpass() : wedge(ix.scale, ix.wedge);
  Spectrum a(grid_, Domain::Frequency);
  const double f1 = kTwoPi * ix.k1 / w.m1;
  const double f2 = kTwoPi * ix.k2 / w.m2;
  for (std::size_t i = 0; i < w.grid_idx.size(); ++i) {
    const int uu = int(w.wrap_idx[i] / w.m2);
    const int dd = int(w.wrap_idx[i] % w.m2);
    const double phase = -(f1 * uu + f2 * dd);
    a[w.grid_idx[i]] =
        std::polar(double(w.weight[i]) * w.norm_scale, phase);
  }
  return a;
}

CurveletCoefs::CurveletCoefs(const CurveletFrame* frame, int band_lo,
                             int band_hi, bool include_lowpass)
    : frame_(frame), band_lo_(band_lo), band_hi_(band_hi),
      lowpass_(include_lowpass) {
  std::size_t off = 0;
  if (lowpass_) {
    const auto& w = frame_->lowpass();
    blocks_.push_back({-1, 0, w.m1, w.m2, off});
    off += w.lattice_size();
  }
  for (int j = band_lo_; j <= band_hi_; ++j) {
    for (int l = 0; l < CurveletFrame::orientations(j); ++l) {
      const auto& w = frame_->wedge(j, l);
      blocks_.push_back({j, l, w.m1, w.m2, off});
      off += w.lattice_size();
    }
  }
  v_.assign(off, cpx(0));
}

int CurveletCoefs::block_of(int scale, int wedge) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].scale == scale && blocks_[i].wedge == wedge) return int(i);
  return -1;
}

cpx CurveletCoefs::at(const CurveletIndex& ix) const {
  const int bi = block_of(ix.scale, ix.wedge);
  if (bi < 0) throw ConfigError("curvelet coefficient block not present");
  const Block& b = blocks_[bi];
  return v_[b.offset + std::size_t(ix.k1) * b.m2 + ix.k2];
}

CurveletCoefs CurveletFrame::analyze(const Spectrum& fhat, int band_lo,
                                     int band_hi,
                                     bool include_lowpass) const {
  if (fhat.grid() != grid_)
    throw ConfigError("curvelet analysis: grid mismatch");
  band_lo = std::max(band_lo, j0_);
  band_hi = std::min(band_hi, j_top_);
  CurveletCoefs out(this, band_lo, band_hi, include_lowpass);
  std::vector<cpx> buf;
  for (std::size_t bi = 0; bi < out.blocks_.size(); ++bi) {
    const auto& blk = out.blocks_[bi];
    const Wedge& w =
        blk.scale == -1 ? lowpass() : wedge(blk.scale, blk.wedge);
    buf.assign(w.lattice_size(), cpx(0));
    const cpx* src = fhat.data();
    for (std::size_t i = 0; i < w.grid_idx.size(); ++i)
      buf[w.wrap_idx[i]] +=
          src[w.grid_idx[i]] * (double(w.weight[i]) * w.norm_scale);
    fft2_raw(buf.data(), w.m1, w.m2, +1);
    std::copy(buf.begin(), buf.end(), out.v_.begin() + blk.offset);
  }
  return out;
}

Spectrum CurveletFrame::synthesize(const CurveletCoefs& c) const {
  if (&c.frame() != this)
    throw ConfigError("curvelet synthesis: coefficients from another frame");
  Spectrum out(grid_, Domain::Frequency);
  std::vector<cpx> buf;
  for (std::size_t bi = 0; bi < c.blocks().size(); ++bi) {
    const auto& blk = c.blocks()[bi];
    const Wedge& w =
        blk.scale == -1 ? lowpass() : wedge(blk.scale, blk.wedge);
    buf.assign(w.lattice_size(), cpx(0));
    std::copy(c.block_data(int(bi)), c.block_data(int(bi)) + w.lattice_size(),
              buf.begin());
    fft2_raw(buf.data(), w.m1, w.m2, -1);
    cpx* dst = out.data();
    for (std::size_t i = 0; i < w.grid_idx.size(); ++i)
      dst[w.grid_idx[i]] +=
          buf[w.wrap_idx[i]] * (double(w.weight[i]) * w.norm_scale);
  }
  return out;
}

}  // namespace ctsep
