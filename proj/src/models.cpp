#include "ctsep/models.hpp"

#include <algorithm>
#include <cmath>

namespace ctsep {

// ---------------------------------------------------------------- boundary

void BoundaryCurve::point(double t, double& x, double& y) const {
  if (is_ellipse) {
    const double c = std::cos(t), s = std::sin(t);
    const double ex = ell_a * c, ey = ell_b * s;
    const double cp = std::cos(ell_phi), sp = std::sin(ell_phi);
    x = center_x + ex * cp - ey * sp;
    y = center_y + ex * sp + ey * cp;
    return;
  }
  double r = radius_c0;
  for (std::size_t k = 0; k < cos_coef.size(); ++k)
    r += cos_coef[k] * std::cos(double(k + 1) * t);
  for (std::size_t k = 0; k < sin_coef.size(); ++k)
    r += sin_coef[k] * std::sin(double(k + 1) * t);
  x = center_x + r * std::cos(t);
  y = center_y + r * std::sin(t);
}

void BoundaryCurve::derivative(double t, double& dx, double& dy) const {
  if (is_ellipse) {
    const double c = std::cos(t), s = std::sin(t);
    const double ex = -ell_a * s, ey = ell_b * c;
    const double cp = std::cos(ell_phi), sp = std::sin(ell_phi);
    dx = ex * cp - ey * sp;
    dy = ex * sp + ey * cp;
    return;
  }
  double r = radius_c0, rp = 0.0;
  for (std::size_t k = 0; k < cos_coef.size(); ++k) {
    const double kk = double(k + 1);
    r += cos_coef[k] * std::cos(kk * t);
    rp -= cos_coef[k] * kk * std::sin(kk * t);
  }
  for (std::size_t k = 0; k < sin_coef.size(); ++k) {
    const double kk = double(k + 1);
    r += sin_coef[k] * std::sin(kk * t);
    rp += sin_coef[k] * kk * std::cos(kk * t);
  }
  dx = rp * std::cos(t) - r * std::sin(t);
  dy = rp * std::sin(t) + r * std::cos(t);
}

bool BoundaryCurve::strictly_convex(int samples) const {
  if (is_ellipse) return ell_a > 0 && ell_b > 0;
  // curvature sign via finite differences of the tangent angle
  const double h = kTwoPi / samples;
  for (int i = 0; i < samples; ++i) {
    const double t = i * h;
    double x0, y0, x1, y1, x2, y2;
    point(t - h, x0, y0);
    point(t, x1, y1);
    point(t + h, x2, y2);
    const double ax = x1 - x0, ay = y1 - y0;
    const double bx = x2 - x1, by = y2 - y1;
    if (ax * by - ay * bx <= 0) return false;
  }
  return true;
}

double BoundaryCurve::max_radius() const {
  if (is_ellipse) return std::max(ell_a, ell_b);
  double m = 0;
  for (int i = 0; i < 4096; ++i) {
    double x, y;
    point(kTwoPi * i / 4096.0, x, y);
    m = std::max(m, std::hypot(x - center_x, y - center_y));
  }
  return m;
}

CartoonSpec CartoonSpec::default_spec() {
  CartoonSpec s;
  s.curve = BoundaryCurve{};
  // background bump kept well inside the torus
  s.f0 = BumpProfile{0.25, 0.46, 0.57, 0.10, 0.44};
  // jump profile: flat across the whole boundary so the edge has a clean
  // constant-height discontinuity (amplitude tuned so ||C_j||^2 ~ 2^-j with
  // constant near one)
  s.f1 = BumpProfile{2.6, 0.5, 0.5, 0.30, 0.46};
  return s;
}

bool point_in_polygon(const std::vector<double>& px,
                      const std::vector<double>& py, double x, double y) {
  // even-odd crossing rule
  bool inside = false;
  const std::size_t n = px.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool cross = (py[i] > y) != (py[j] > y);
    if (cross) {
      const double xin =
          px[j] + (px[i] - px[j]) * (y - py[j]) / (py[i] - py[j]);
      if (x < xin) inside = !inside;
    }
  }
  return inside;
}

Cartoon build_cartoon(const CartoonSpec& spec, GridSpec grid) {
  const int n = grid.n;
  const int m = std::max(spec.boundary_samples, 4 * n);

  std::vector<double> px(m), py(m);
  for (int i = 0; i < m; ++i) {
    double x, y;
    spec.curve.point(kTwoPi * i / m, x, y);
    px[i] = x;
    py[i] = y;
    if (x <= 0.02 || x >= 0.98 || y <= 0.02 || y >= 0.98)
      throw ConfigError("cartoon boundary curve exits the fundamental domain");
  }
  if (!spec.curve.strictly_convex())
    throw ConfigError("cartoon boundary curve is not strictly convex");

  // scanline even-odd fill: crossings of each horizontal line y = i2/n
  Field f(grid, Domain::Space);
  std::vector<std::vector<double>> row_cross(n);
  for (int i = 0, j = m - 1; i < m; j = i++) {
    const double y0 = py[j], y1 = py[i];
    if (y0 == y1) continue;
    const double ylo = std::min(y0, y1), yhi = std::max(y0, y1);
    int r0 = int(std::ceil(ylo * n));
    int r1 = int(std::floor(yhi * n));
    for (int r = std::max(0, r0); r <= std::min(n - 1, r1); ++r) {
      const double y = double(r) / n;
      if ((y0 > y) == (y1 > y)) continue;
      row_cross[r].push_back(px[j] + (px[i] - px[j]) * (y - y0) / (y1 - y0));
    }
  }
  std::vector<std::uint8_t> inside(grid.size(), 0);
  for (int r = 0; r < n; ++r) {
    auto& xs = row_cross[r];
    std::sort(xs.begin(), xs.end());
    // fill alternating spans; inside[(i1,i2)] keyed by x=(i1/n, i2/n)
    for (std::size_t c = 0; c + 1 < xs.size(); c += 2) {
      int a = int(std::ceil(xs[c] * n));
      int b = int(std::ceil(xs[c + 1] * n)) - 1;
      for (int i1 = std::max(0, a); i1 <= std::min(n - 1, b); ++i1)
        inside[std::size_t(i1) * n + r] = 1;
    }
  }

  for (int i1 = 0; i1 < n; ++i1) {
    const double x = double(i1) / n;
    for (int i2 = 0; i2 < n; ++i2) {
      const double y = double(i2) / n;
      double v = spec.f0(x, y);
      if (inside[std::size_t(i1) * n + i2]) v += spec.f1(x, y);
      f.at(i1, i2) = v;
    }
  }

  Cartoon out;
  out.field = std::move(f);
  if (spec.f1.amplitude != 0.0) {
    out.boundary.reserve(m);
    double jump_sum = 0;
    for (int i = 0; i < m; ++i) {
      BoundarySample b;
      b.x = px[i];
      b.y = py[i];
      double dx, dy;
      spec.curve.derivative(kTwoPi * i / m, dx, dy);
      const double len = std::hypot(dx, dy);
      b.tx = dx / len;
      b.ty = dy / len;
      b.nx = -b.ty;
      b.ny = b.tx;
      out.boundary.push_back(b);
      jump_sum += spec.f1(b.x, b.y);
    }
    out.jump_amplitude = jump_sum / m;
  }
  return out;
}

double fourier_decay_exponent(const Field& c) {
  if (c.norm2() == 0.0) throw NumericError("decay fit on a zero field");
  Spectrum ch = fft(c);
  const int n = c.n();
  const double r_lo = 6.0, r_hi = 0.45 * n;
  const double ratio = std::pow(2.0, 1.0 / 3.0);
  const int nbins = int(std::floor(std::log(r_hi / r_lo) / std::log(ratio)));
  std::vector<double> bin_max(nbins, 0.0);
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = c.grid().freq_of_index(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = c.grid().freq_of_index(i2);
      const double r = std::hypot(x1, x2);
      if (r < r_lo || r >= r_hi) continue;
      const int b = int(std::floor(std::log(r / r_lo) / std::log(ratio)));
      if (b >= 0 && b < nbins)
        bin_max[b] = std::max(bin_max[b], std::abs(ch.at(i1, i2)));
    }
  }
  // least squares of log(max) against log(bin center radius)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int b = 0; b < nbins; ++b) {
    if (bin_max[b] <= 0) continue;
    const double lx = std::log(r_lo * std::pow(ratio, b + 0.5));
    const double ly = std::log(bin_max[b]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) throw NumericError("decay fit needs at least 3 usable bins");
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

// ----------------------------------------------------------------- texture

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// sign of the first nonzero of (n1, n2, m1, m2); 0 for the origin
int index_sign(int m1, int m2, int n1, int n2) {
  if (n1 != 0) return n1 > 0 ? 1 : -1;
  if (n2 != 0) return n2 > 0 ? 1 : -1;
  if (m1 != 0) return m1 > 0 ? 1 : -1;
  if (m2 != 0) return m2 > 0 ? 1 : -1;
  return 0;
}

double coefficient_phase(const TextureSpec& spec, int m1, int m2, int n1,
                         int n2) {
  if (spec.phase_rule == PhaseRule::Positive) return 0.0;
  const int sg = index_sign(m1, m2, n1, n2);
  if (sg == 0) return 0.0;
  const int a1 = sg * m1, a2 = sg * m2, b1 = sg * n1, b2 = sg * n2;
  std::uint64_t h = spec.seed;
  h = mix64(h ^ (std::uint64_t(std::uint32_t(a1)) << 32 | std::uint32_t(a2)));
  h = mix64(h ^ (std::uint64_t(std::uint32_t(b1)) << 32 | std::uint32_t(b2)));
  const double phase = kTwoPi * (double(h >> 11) * 0x1.0p-53);
  return sg > 0 ? phase : -phase;
}

}  // namespace

TextureSpec TextureSpec::default_spec(double delta, int s,
                                      std::uint64_t seed) {
  TextureSpec t;
  t.delta = delta;
  t.size = std::max(1, s);
  t.seed = seed;
  return t;
}

cpx texture_coefficient(const TextureSpec& spec, int m1, int m2, int n1,
                        int n2) {
  const double p = 2.0 + spec.delta;
  const double mm = std::max(std::hypot(double(m1), double(m2)), 1.0);
  const double nn = std::max(std::hypot(double(n1), double(n2)), 1.0);
  const double mag = spec.amplitude * std::pow(mm, -p) * std::pow(nn, -p);
  const double ph = coefficient_phase(spec, m1, m2, n1, n2);
  return std::polar(mag, ph);
}

Field build_texture(const TextureSpec& spec, GridSpec grid) {
  const int n = grid.n;
  const int s = spec.size;
  if (s < 1) throw ConfigError("texture size parameter must be >= 1");
  int ftrunc = spec.frequency_truncation > 0 ? spec.frequency_truncation : n / 2;
  if (ftrunc > n / 2)
    throw ConfigError("texture frequency truncation |s n| exceeds Nyquist");

  const int two_s = 2 * s;
  const int m_max = int(std::floor(spec.spatial_truncation * s));
  const int n_bound = ftrunc / s;
  GaborWindow1d g1;

  Spectrum th(grid, Domain::Frequency);
  std::vector<cpx> folded(std::size_t(two_s) * two_s);
  for (int n1 = -n_bound; n1 <= n_bound; ++n1) {
    for (int n2 = -n_bound; n2 <= n_bound; ++n2) {
      if (std::hypot(double(s) * n1, double(s) * n2) > ftrunc) continue;
      // fold the m-sum modulo 2s (the modulation phases are 2s-periodic)
      std::fill(folded.begin(), folded.end(), cpx(0));
      for (int m1 = -m_max; m1 <= m_max; ++m1) {
        const int r1 = ((m1 % two_s) + two_s) % two_s;
        for (int m2 = -m_max; m2 <= m_max; ++m2) {
          if (std::hypot(double(m1), double(m2)) > spec.spatial_truncation * s)
            continue;
          const int r2 = ((m2 % two_s) + two_s) % two_s;
          folded[std::size_t(r1) * two_s + r2] +=
              texture_coefficient(spec, m1, m2, n1, n2);
        }
      }
      // D_n(xi) = sum_m d e^{-2 pi i m.xi/(2s)} on the 2s x 2s torus
      fft2_raw(folded.data(), two_s, two_s, -1);
      const int lo1 = std::max(s * n1 - s + 1, -n / 2);
      const int hi1 = std::min(s * n1 + s - 1, n / 2 - 1);
      const int lo2 = std::max(s * n2 - s + 1, -n / 2);
      const int hi2 = std::min(s * n2 + s - 1, n / 2 - 1);
      for (int x1 = lo1; x1 <= hi1; ++x1) {
        const double w1 = g1(double(x1 - s * n1) / s);
        const int f1 = ((x1 % two_s) + two_s) % two_s;
        for (int x2 = lo2; x2 <= hi2; ++x2) {
          const double w2 = g1(double(x2 - s * n2) / s);
          const int f2 = ((x2 % two_s) + two_s) % two_s;
          th.atf(x1, x2) +=
              (w1 * w2 / s) * folded[std::size_t(f1) * two_s + f2];
        }
      }
    }
  }
  return ifft(th);
}

int energy_match_closed_form(int j, double delta) {
  if (j < 0) throw ConfigError("energy matching needs j >= 0");
  if (!(delta > 0)) throw ConfigError("energy matching needs delta > 0");
  const double e = (1.0 + 2.0 * delta) / (2.0 + 2.0 * delta);
  return std::max(1, int(std::llround(std::pow(2.0, e * j))));
}

double texture_band_norm(const TextureSpec& spec, int s, int j) {
  if (s < 1) throw ConfigError("texture band norm needs s >= 1");
  const double p = 2.0 + spec.delta;
  const double inner = double(1 << (j - 1)) / s;
  const double outer = double(2 << j) / s;

  // collect annulus lattice points (open annulus, matching the open
  // support of the radial window)
  std::vector<std::pair<int, int>> ns;
  const int nb = int(std::floor(outer)) + 1;
  for (int n1 = -nb; n1 <= nb; ++n1)
    for (int n2 = -nb; n2 <= nb; ++n2) {
      const double r = std::hypot(double(n1), double(n2));
      if (r <= inner || r >= outer) continue;
      if (spec.frequency_truncation > 0 &&
          std::hypot(double(s) * n1, double(s) * n2) >
              spec.frequency_truncation)
        continue;
      ns.emplace_back(n1, n2);
    }
  if (ns.empty()) return 0.0;

  const int m_max = int(std::floor(spec.spatial_truncation * s));
  const int w = 2 * m_max + 1;
  // lags with e^{-|v|/2} above double precision
  const int v_max = 81;
  int pad = w + v_max + 1;
  std::vector<cpx> buf;

  double total = 0.0;
  for (auto [n1, n2] : ns) {
    buf.assign(std::size_t(pad) * pad, cpx(0));
    const double nn = std::max(std::hypot(double(n1), double(n2)), 1.0);
    const double nfac = spec.amplitude * std::pow(nn, -p);
    for (int m1 = -m_max; m1 <= m_max; ++m1) {
      const int r1 = ((m1 % pad) + pad) % pad;
      for (int m2 = -m_max; m2 <= m_max; ++m2) {
        const double mm = std::hypot(double(m1), double(m2));
        if (mm > spec.spatial_truncation * s) continue;
        const int r2 = ((m2 % pad) + pad) % pad;
        const double mag = nfac * std::pow(std::max(mm, 1.0), -p);
        buf[std::size_t(r1) * pad + r2] +=
            std::polar(mag, coefficient_phase(spec, m1, m2, n1, n2));
      }
    }
    // autocorrelation C(v) = sum_m d_{m+v} conj(d_m) via FFT; the padding
    // leaves lags |v| <= v_max alias-free
    fft2_raw(buf.data(), pad, pad, -1);
    for (auto& z : buf) z = cpx(std::norm(z), 0.0);
    fft2_raw(buf.data(), pad, pad, +1);
    const double scale = 1.0 / (double(pad) * pad);
    double acc = 0.0;
    for (int v1 = -v_max; v1 <= v_max; ++v1) {
      const int r1 = ((v1 % pad) + pad) % pad;
      for (int v2 = -v_max; v2 <= v_max; ++v2) {
        const double vv = std::hypot(double(v1), double(v2));
        if (vv > v_max) continue;
        const int r2 = ((v2 % pad) + pad) % pad;
        acc += std::exp(-0.5 * vv) * scale *
               buf[std::size_t(r1) * pad + r2].real();
      }
    }
    total += acc;
  }
  return total;
}

int energy_match_numeric(int j, const TextureSpec& spec, int s_min,
                         int s_max) {
  const double target = std::pow(2.0, -double(j));
  // the band expression grows as s increases (the annulus slides toward
  // small |n| where the coefficients are largest); bracket by doubling
  double prev = texture_band_norm(spec, s_min, j);
  bool any_nonzero = prev != 0.0;
  int lo = s_min, hi = -1;
  int s = s_min;
  while (s < s_max) {
    const int next = std::min(s_max, s * 2);
    const double val = texture_band_norm(spec, next, j);
    any_nonzero = any_nonzero || val != 0.0;
    if (val >= target) {
      lo = s;
      hi = next;
      break;
    }
    s = next;
    prev = val;
  }
  if (!any_nonzero)
    throw NumericError("energy matching: band expression is identically zero "
                       "over s in [" + std::to_string(s_min) + "," +
                       std::to_string(s_max) + "]");
  if (hi < 0)
    throw NumericError("energy matching: no bracketing s in [" +
                       std::to_string(s_min) + "," + std::to_string(s_max) +
                       "]");
  // scan the bracket (geometric refinement down to a linear window)
  while (hi - lo > 24) {
    const int mid = (lo + hi) / 2;
    if (texture_band_norm(spec, mid, j) >= target)
      hi = mid;
    else
      lo = mid;
  }
  int best_s = lo;
  double best = std::abs(texture_band_norm(spec, lo, j) - target);
  for (int cand = lo + 1; cand <= hi; ++cand) {
    const double d = std::abs(texture_band_norm(spec, cand, j) - target);
    if (d < best) {
      best = d;
      best_s = cand;
    }
  }
  return best_s;
}

}  // namespace ctsep
