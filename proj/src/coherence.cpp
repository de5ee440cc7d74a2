#include "ctsep/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctsep {

namespace {

// sampled modulus of the cross inner product Q(tau) = sum_xi C(xi)
// e^{-2 pi i tau.xi}; the modulus is envelope-smooth, so a moderately
// oversampled grid localizes maxima well (exact values are recomputed for
// the leading candidates).
struct EnvProfile {
  int g = 0;
  std::vector<float> q;   // |Q| at tau = (p1/g, p2/g)
  double peak = 0;
  std::vector<float> ring_tail;  // max over Chebyshev cell-radius >= i

  bool empty() const { return peak == 0; }

  double lookup(double t1, double t2) const {
    t1 -= std::floor(t1);
    t2 -= std::floor(t2);
    const double u = t1 * g, v = t2 * g;
    const int i0 = int(u), j0 = int(v);
    const double fu = u - i0, fv = v - j0;
    const int i1 = (i0 + 1) % g, j1 = (j0 + 1) % g;
    const int ia = i0 % g, ja = j0 % g;
    const double a = q[std::size_t(ia) * g + ja];
    const double b = q[std::size_t(ia) * g + j1];
    const double c = q[std::size_t(i1) * g + ja];
    const double d = q[std::size_t(i1) * g + j1];
    return (1 - fu) * ((1 - fv) * a + fv * b) + fu * ((1 - fv) * c + fv * d);
  }

  // torus radius beyond which |Q| stays below rel * peak
  double cut_radius(double rel) const {
    const double tol = rel * peak;
    int i = int(ring_tail.size()) - 1;
    while (i > 0 && ring_tail[i - 1] <= tol) --i;
    return double(i + 1) / g;
  }
};

struct ProductEntry {
  int x1, x2;
  double val;
};

void finish_profile(EnvProfile& p, std::vector<cpx>& buf) {
  fft2_raw(buf.data(), p.g, p.g, -1);
  p.q.resize(buf.size());
  p.peak = 0;
  const int half = p.g / 2;
  p.ring_tail.assign(half + 1, 0.0f);
  for (int i = 0; i < p.g; ++i) {
    const int si = i <= half ? i : p.g - i;
    for (int k = 0; k < p.g; ++k) {
      const int sk = k <= half ? k : p.g - k;
      const double a = std::abs(buf[std::size_t(i) * p.g + k]);
      p.q[std::size_t(i) * p.g + k] = float(a);
      p.peak = std::max(p.peak, a);
      const int ring = std::max(si, sk);
      auto& r = p.ring_tail[std::min(ring, half)];
      r = std::max(r, float(a));
    }
  }
  // suffix max
  for (int i = half - 1; i >= 0; --i)
    p.ring_tail[i] = std::max(p.ring_tail[i], p.ring_tail[i + 1]);
}

// cross product C(xi) of wedge (j,l) against the tight gabor atom window
// at modulation n; returns false if the supports do not meet.
bool build_product(const CurveletFrame& cf, const CurveletFrame::Wedge& w,
                   const GaborFrame& gf, int n1, int n2,
                   std::vector<ProductEntry>& out) {
  out.clear();
  const int s = gf.s();
  const int half = gf.grid().n / 2;
  // quick reject on the sector geometry
  if (w.j < 0) return false;  // low-pass channel never joins coherence sums
  {
    const double tr = cf.radial_window().transition();
    const double outer = w.j == cf.j_top() ? double(half) * std::sqrt(2.0)
                                           : std::pow(2.0, w.j + tr);
    const double d = sector_distance(double(s) * n1, double(s) * n2, w.theta,
                                     double(1 << (w.j - 1)), outer,
                                     CurveletFrame::orientation_spacing(w.j));
    if (d > std::sqrt(2.0) * s + 1.0) return false;
  }
  const int lo1 = std::max(s * n1 - s + 1, -half);
  const int hi1 = std::min(s * n1 + s - 1, half - 1);
  const int lo2 = std::max(s * n2 - s + 1, -half);
  const int hi2 = std::min(s * n2 + s - 1, half - 1);
  const double tight = gf.parseval_scale();
  for (int x1 = lo1; x1 <= hi1; ++x1)
    for (int x2 = lo2; x2 <= hi2; ++x2) {
      const double cw = cf.wedge_window(w.j, w.l, x1, x2);
      if (cw == 0.0) continue;
      const double gw = gf.window_value(x1, x2, n1, n2);
      if (gw == 0.0) continue;
      out.push_back({x1, x2, cw * w.norm_scale * gw * tight});
    }
  return !out.empty();
}

EnvProfile profile_from_product(const std::vector<ProductEntry>& prod,
                                int g) {
  EnvProfile p;
  p.g = g;
  std::vector<cpx> buf(std::size_t(g) * g, cpx(0));
  for (const auto& e : prod) {
    const int i = ((e.x1 % g) + g) % g;
    const int k = ((e.x2 % g) + g) % g;
    buf[std::size_t(i) * g + k] += e.val;
  }
  finish_profile(p, buf);
  return p;
}

// position of lattice point k on the wedge's sheared lattice
inline void lattice_position(const CurveletFrame::Wedge& w, int k1, int k2,
                             double& x, double& y) {
  double xu = double(k1) / w.m1 - double(w.shear) * k2 / w.m2;
  double xv = double(k2) / w.m2;
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

// exact sum_{k in members} |<gamma_k, g_lambda>| for one wedge, via the
// wrapped transform of the windowed product (all k at once)
double exact_wedge_sum(const CurveletFrame::Wedge& w,
                       const std::vector<std::uint32_t>& ks,
                       const std::vector<ProductEntry>& prod, int s, int m1,
                       int m2) {
  const double step = kPi / s;  // 2 pi/(2s)
  const std::size_t lattice = w.lattice_size();
  const double fft_cost = double(lattice) * (std::log2(double(lattice)) + 4);
  const double direct_cost = double(ks.size()) * prod.size();
  if (direct_cost < fft_cost || lattice > (std::size_t(1) << 22)) {
    double acc = 0;
    for (const auto kk : ks) {
      const int k1 = int(kk / w.m2), k2 = int(kk % w.m2);
      const double f1 = kTwoPi * k1 / w.m1, f2 = kTwoPi * k2 / w.m2;
      cpx z = 0;
      for (const auto& e : prod) {
        const int u = w.cls == 0 ? e.x1 : e.x2;
        const int v = w.cls == 0 ? e.x2 : e.x1;
        const double ph = -(f1 * u + f2 * double(v - w.shear * u)) +
                          step * (double(m1) * e.x1 + double(m2) * e.x2);
        z += e.val * std::polar(1.0, ph);
      }
      acc += std::abs(z);
    }
    return acc;
  }
  std::vector<cpx> buf(lattice, cpx(0));
  for (const auto& e : prod) {
    const int u = w.cls == 0 ? e.x1 : e.x2;
    const int v = w.cls == 0 ? e.x2 : e.x1;
    const int d = v - w.shear * u;
    const int uu = ((u % w.m1) + w.m1) % w.m1;
    const int dd = ((d % w.m2) + w.m2) % w.m2;
    buf[std::size_t(uu) * w.m2 + dd] +=
        e.val * std::polar(1.0, -step * (double(m1) * e.x1 +
                                         double(m2) * e.x2));
  }
  fft2_raw(buf.data(), w.m1, w.m2, +1);
  double acc = 0;
  for (const auto kk : ks) acc += std::abs(buf[kk]);
  return acc;
}

struct Candidate {
  double val;
  int a, b, c, d;  // identifies the candidate atom
  bool operator<(const Candidate& o) const { return val > o.val; }
};

void push_candidate(std::vector<Candidate>& heap, std::size_t cap,
                    const Candidate& c) {
  if (heap.size() < cap) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end());
  } else if (c.val > heap.front().val) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = c;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

double sector_distance(double x, double y, double theta, double r_lo,
                       double r_hi, double half_angle) {
  const double r = std::hypot(x, y);
  if (r == 0.0) return r_lo;
  if (half_angle >= kPi) {
    if (r < r_lo) return r_lo - r;
    if (r > r_hi) return r - r_hi;
    return 0.0;
  }
  const double omega = std::atan2(y, x);
  const double d = circ_dist(omega, theta, kTwoPi);
  if (d <= half_angle) {
    if (r < r_lo) return r_lo - r;
    if (r > r_hi) return r - r_hi;
    return 0.0;
  }
  // nearest point lies on one of the two straight edges
  auto seg_dist = [&](double ang) {
    const double ax = r_lo * std::cos(ang), ay = r_lo * std::sin(ang);
    const double bx = r_hi * std::cos(ang), by = r_hi * std::sin(ang);
    const double vx = bx - ax, vy = by - ay;
    double t = ((x - ax) * vx + (y - ay) * vy) / (vx * vx + vy * vy);
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(x - (ax + t * vx), y - (ay + t * vy));
  };
  return std::min(seg_dist(theta + half_angle), seg_dist(theta - half_angle));
}

GaborCluster build_gabor_cluster(int j, const RadiiSchedule& sched,
                                 const GaborFrame& frame) {
  GaborCluster c;
  c.s = frame.s();
  c.r1 = sched.r1(j);
  c.r2 = sched.r2(j);
  const int s = frame.s();
  int m_cap = int(std::floor(c.r1));
  if (m_cap >= s) {
    m_cap = s - 1;  // keep torus positions unique
    c.clipped = true;
  }
  for (int a = -m_cap; a <= m_cap; ++a)
    for (int b = -m_cap; b <= m_cap; ++b)
      if (std::hypot(double(a), double(b)) <= c.r1) c.ms.emplace_back(a, b);
  int n_cap = int(std::floor(c.r2));
  if (n_cap > frame.n_max()) {
    n_cap = frame.n_max();
    c.clipped = true;
  }
  for (int a = -n_cap; a <= n_cap; ++a)
    for (int b = -n_cap; b <= n_cap; ++b)
      if (std::hypot(double(a), double(b)) <= c.r2) c.ns.emplace_back(a, b);
  return c;
}

CurveletCluster build_curvelet_cluster(const CurveletFrame& frame, int j,
                                       double epsilon,
                                       const std::vector<BoundarySample>& b) {
  if (!(epsilon > 0.0) || !(epsilon < 0.125))
    throw ConfigError("cluster epsilon must lie in (0, 1/8)");
  CurveletCluster out;
  out.j = j;
  out.epsilon = epsilon;
  if (b.empty()) return out;  // smooth cartoon: empty cluster

  std::vector<double> phi(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    double a = std::atan2(b[i].ny, b[i].nx);
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    phi[i] = a;
  }

  const int lo = std::max(frame.j0(), j - 1);
  const int hi = std::min(frame.j_top(), j + 1);
  for (int jj = lo; jj <= hi; ++jj) {
    const double a = std::pow(2.0, -jj);
    const double width = std::pow(a, 1.0 - epsilon);
    const double ang_width = std::sqrt(a);
    const double spacing = CurveletFrame::orientation_spacing(jj);
    // a wedge qualifies at a boundary point when its direction is within
    // sqrt(a_j) of the local normal, or is the nearest wedge direction
    const double ang_tol =
        std::max(ang_width, 0.5 * spacing * (1.0 + 1e-12));
    const int L = CurveletFrame::orientations(jj);
    for (int l = 0; l < L; ++l) {
      double th = std::fmod(CurveletFrame::orientation_angle(jj, l), kPi);
      if (th < 0) th += kPi;
      // samples this wedge responds to
      std::vector<std::uint32_t> pass;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (circ_dist(th, phi[i], kPi) <= ang_tol)
          pass.push_back(std::uint32_t(i));
      if (pass.empty()) continue;
      // bucket the passing samples for distance queries
      const double cell = std::max(width, 1.0 / 512.0);
      const int nc = std::max(1, int(std::floor(1.0 / cell)));
      std::vector<std::vector<std::uint32_t>> bucket(std::size_t(nc) * nc);
      auto bucket_of = [&](double x, double y) {
        int cx = int(x * nc) % nc, cy = int(y * nc) % nc;
        if (cx < 0) cx += nc;
        if (cy < 0) cy += nc;
        return std::size_t(cx) * nc + cy;
      };
      for (auto i : pass) bucket.at(bucket_of(b[i].x, b[i].y)).push_back(i);

      const auto& w = frame.wedge(jj, l);
      std::vector<std::uint32_t> ks;
      for (int k1 = 0; k1 < w.m1; ++k1) {
        for (int k2 = 0; k2 < w.m2; ++k2) {
          double x, y;
          lattice_position(w, k1, k2, x, y);
          bool member = false;
          const int cx0 = int(x * nc), cy0 = int(y * nc);
          for (int dx = -1; dx <= 1 && !member; ++dx)
            for (int dy = -1; dy <= 1 && !member; ++dy) {
              int cx = (cx0 + dx) % nc, cy = (cy0 + dy) % nc;
              if (cx < 0) cx += nc;
              if (cy < 0) cy += nc;
              for (auto i : bucket[std::size_t(cx) * nc + cy]) {
                double ddx = std::abs(x - b[i].x);
                double ddy = std::abs(y - b[i].y);
                ddx = std::min(ddx, 1.0 - ddx);
                ddy = std::min(ddy, 1.0 - ddy);
                if (ddx * ddx + ddy * ddy <= width * width) {
                  member = true;
                  break;
                }
              }
            }
          if (member) ks.push_back(std::uint32_t(k1) * w.m2 + k2);
        }
      }
      if (!ks.empty())
        out.members.push_back({jj, l, std::move(ks)});
    }
  }
  return out;
}

double relative_sparsity(const CurveletCoefs& c, const CurveletCluster& s) {
  double total = c.l1();
  double in_cluster = 0;
  for (const auto& wm : s.members) {
    const int bi = c.block_of(wm.scale, wm.wedge);
    if (bi < 0) continue;
    const cpx* blk = c.block_data(bi);
    for (auto k : wm.ks) in_cluster += std::abs(blk[k]);
  }
  return total - in_cluster;
}

double relative_sparsity(const GaborCoefs& c, const GaborCluster& s) {
  double total = c.l1();
  double in_cluster = 0;
  const int two_s = 2 * s.s;
  for (const auto& [n1, n2] : s.ns) {
    const int bi = c.block_of(n1, n2);
    if (bi < 0) continue;
    const cpx* blk = c.block(bi);
    for (const auto& [m1, m2] : s.ms) {
      const int r1 = ((m1 % two_s) + two_s) % two_s;
      const int r2 = ((m2 % two_s) + two_s) % two_s;
      in_cluster += std::abs(blk[std::size_t(r1) * two_s + r2]);
    }
  }
  return total - in_cluster;
}

double error_bound(double delta1, double delta2, double mu_c,
                   bool* diverged) {
  if (delta1 < 0 || delta2 < 0 || mu_c < 0)
    throw ConfigError("error_bound arguments must be nonnegative");
  if (mu_c >= 0.5) {
    if (diverged) *diverged = true;
    return std::numeric_limits<double>::infinity();
  }
  if (diverged) *diverged = false;
  return 2.0 * (delta1 + delta2) / (1.0 - 2.0 * mu_c);
}

cpx pair_inner(const CurveletFrame& cf, const CurveletIndex& eta,
               const GaborFrame& gf, const GaborIndex& lam) {
  if (eta.scale == -1)
    throw ConfigError("pair_inner: low-pass channel atoms not supported");
  const auto& w = cf.wedge(eta.scale, eta.wedge);
  const int s = gf.s();
  const int half = gf.grid().n / 2;
  const int lo1 = std::max(s * lam.n1 - s + 1, -half);
  const int hi1 = std::min(s * lam.n1 + s - 1, half - 1);
  const int lo2 = std::max(s * lam.n2 - s + 1, -half);
  const int hi2 = std::min(s * lam.n2 + s - 1, half - 1);
  const double f1 = kTwoPi * eta.k1 / w.m1, f2 = kTwoPi * eta.k2 / w.m2;
  const double step = kPi / s;
  const double tight = gf.parseval_scale();
  cpx acc = 0;
  for (int x1 = lo1; x1 <= hi1; ++x1)
    for (int x2 = lo2; x2 <= hi2; ++x2) {
      const double cw = cf.wedge_window(eta.scale, eta.wedge, x1, x2);
      if (cw == 0.0) continue;
      const double gw = gf.window_value(x1, x2, lam.n1, lam.n2);
      if (gw == 0.0) continue;
      const int u = w.cls == 0 ? x1 : x2;
      const int v = w.cls == 0 ? x2 : x1;
      const double phase = -(f1 * u + f2 * double(v - w.shear * u)) +
                           step * (double(lam.m1) * x1 + double(lam.m2) * x2);
      acc += cw * w.norm_scale * gw * tight * std::polar(1.0, phase);
    }
  return acc;
}

double cluster_coherence(const CurveletFrame& cf, const CurveletCluster& s1,
                         const GaborFrame& gf,
                         const std::vector<std::pair<int, int>>& candidate_ns,
                         GaborIndex* argmax) {
  if (candidate_ns.empty())
    throw ConfigError("cluster_coherence: empty candidate window");
  if (s1.members.empty()) return 0.0;
  const int s = gf.s();
  const int two_s = 2 * s;
  const int g = next_fast_size(6 * s + 4);

  std::vector<std::vector<float>> acc(candidate_ns.size());
  std::vector<ProductEntry> prod;
  std::vector<std::pair<double, double>> pos;
  for (const auto& wm : s1.members) {
    const auto& w = cf.wedge(wm.scale, wm.wedge);
    pos.clear();
    pos.reserve(wm.ks.size());
    for (auto kk : wm.ks) {
      double x, y;
      lattice_position(w, int(kk / w.m2), int(kk % w.m2), x, y);
      pos.emplace_back(x, y);
    }
    for (std::size_t ni = 0; ni < candidate_ns.size(); ++ni) {
      const auto [n1, n2] = candidate_ns[ni];
      if (!build_product(cf, w, gf, n1, n2, prod)) continue;
      EnvProfile p = profile_from_product(prod, g);
      if (p.empty()) continue;
      if (acc[ni].empty()) acc[ni].assign(std::size_t(two_s) * two_s, 0.0f);
      const double rcut = p.cut_radius(1e-3);
      const int radius = std::min(s, int(std::ceil(rcut * two_s)) + 1);
      for (const auto& [bx, by] : pos) {
        const int mc1 = int(std::lround(bx * two_s));
        const int mc2 = int(std::lround(by * two_s));
        for (int d1 = -radius; d1 <= radius; ++d1) {
          const int m1 = mc1 + d1;
          const double t1 = bx - double(m1) / two_s;
          const int r1 = ((m1 % two_s) + two_s) % two_s;
          for (int d2 = -radius; d2 <= radius; ++d2) {
            const int m2 = mc2 + d2;
            const double t2 = by - double(m2) / two_s;
            const int r2 = ((m2 % two_s) + two_s) % two_s;
            acc[ni][std::size_t(r1) * two_s + r2] +=
                float(p.lookup(t1, t2));
          }
        }
      }
    }
  }

  // leading candidates by the sampled envelope
  std::vector<Candidate> heap;
  const std::size_t cap = 96;
  for (std::size_t ni = 0; ni < candidate_ns.size(); ++ni) {
    if (acc[ni].empty()) continue;
    for (int m1 = 0; m1 < two_s; ++m1)
      for (int m2 = 0; m2 < two_s; ++m2) {
        const double v = acc[ni][std::size_t(m1) * two_s + m2];
        if (v > 0)
          push_candidate(heap, cap,
                         {v, m1, m2, candidate_ns[ni].first,
                          candidate_ns[ni].second});
      }
  }
  if (heap.empty()) return 0.0;

  // exact re-evaluation of the leading candidates
  double best = 0;
  GaborIndex best_ix;
  for (const auto& cand : heap) {
    GaborIndex lam{cand.a, cand.b, cand.c, cand.d};
    double tot = 0;
    for (const auto& wm : s1.members) {
      const auto& w = cf.wedge(wm.scale, wm.wedge);
      if (!build_product(cf, w, gf, lam.n1, lam.n2, prod)) continue;
      tot += exact_wedge_sum(w, wm.ks, prod, s, lam.m1, lam.m2);
    }
    if (tot > best) {
      best = tot;
      best_ix = lam;
    }
  }
  if (argmax) *argmax = best_ix;
  return best;
}

double cluster_coherence(const GaborFrame& gf, const GaborCluster& s2,
                         const CurveletFrame& cf, int band_lo, int band_hi,
                         CurveletIndex* argmax) {
  if (s2.ms.empty() || s2.ns.empty()) return 0.0;
  band_lo = std::max(band_lo, cf.j0());
  band_hi = std::min(band_hi, cf.j_top());
  if (band_lo > band_hi)
    throw ConfigError("cluster_coherence: empty candidate window");
  const int s = gf.s();
  const int two_s = 2 * s;
  const int g = next_fast_size(6 * s + 4);

  std::vector<Candidate> heap;
  const std::size_t cap = 96;
  std::vector<ProductEntry> prod;
  std::vector<float> acc;
  for (int jj = band_lo; jj <= band_hi; ++jj) {
    for (int l = 0; l < CurveletFrame::orientations(jj); ++l) {
      const auto& w = cf.wedge(jj, l);
      acc.assign(w.lattice_size(), 0.0f);
      bool touched = false;
      for (const auto& [n1, n2] : s2.ns) {
        if (!build_product(cf, w, gf, n1, n2, prod)) continue;
        EnvProfile p = profile_from_product(prod, g);
        if (p.empty()) continue;
        touched = true;
        const double rcut = p.cut_radius(1e-3);
        const int rad1 = std::min(w.m1, int(std::ceil(rcut * w.m1)) + 1);
        const int rad2 = std::min(w.m2, int(std::ceil(rcut * w.m2)) + 1);
        for (const auto& [m1, m2] : s2.ms) {
          const double x1 = double(m1) / two_s - std::floor(double(m1) / two_s);
          const double x2 = double(m2) / two_s - std::floor(double(m2) / two_s);
          const double xu = w.cls == 0 ? x1 : x2;
          const double xv = w.cls == 0 ? x2 : x1;
          const int k2c = int(std::lround(xv * w.m2));
          for (int d2 = -rad2; d2 <= rad2; ++d2) {
            const int k2 = k2c + d2;
            const double bv = double(k2) / w.m2;
            const double k1c_f = (xu + double(w.shear) * k2 / w.m2) * w.m1;
            const int k1c = int(std::lround(k1c_f));
            const int r2 = ((k2 % w.m2) + w.m2) % w.m2;
            for (int d1 = -rad1; d1 <= rad1; ++d1) {
              const int k1 = k1c + d1;
              const double bu = double(k1) / w.m1 - double(w.shear) * k2 / w.m2;
              const double tu = bu - xu, tv = bv - xv;
              const double t1 = w.cls == 0 ? tu : tv;
              const double t2 = w.cls == 0 ? tv : tu;
              const int r1 = ((k1 % w.m1) + w.m1) % w.m1;
              acc[std::size_t(r1) * w.m2 + r2] += float(p.lookup(t1, t2));
            }
          }
        }
      }
      if (!touched) continue;
      for (int k1 = 0; k1 < w.m1; ++k1)
        for (int k2 = 0; k2 < w.m2; ++k2) {
          const double v = acc[std::size_t(k1) * w.m2 + k2];
          if (v > 0) push_candidate(heap, cap, {v, jj, l, k1, k2});
        }
    }
  }
  if (heap.empty()) return 0.0;

  double best = 0;
  CurveletIndex best_ix;
  for (const auto& cand : heap) {
    CurveletIndex eta{cand.a, cand.b, cand.c, cand.d};
    double tot = 0;
    for (const auto& [n1, n2] : s2.ns)
      for (const auto& [m1, m2] : s2.ms) {
        GaborIndex lam{((m1 % two_s) + two_s) % two_s,
                       ((m2 % two_s) + two_s) % two_s, n1, n2};
        tot += std::abs(pair_inner(cf, eta, gf, lam));
      }
    if (tot > best) {
      best = tot;
      best_ix = eta;
    }
  }
  if (argmax) *argmax = best_ix;
  return best;
}

double mutual_coherence(const CurveletFrame& cf, int band_lo, int band_hi,
                        const GaborFrame& gf,
                        const std::vector<std::pair<int, int>>& ns) {
  if (ns.empty()) throw ConfigError("mutual_coherence: empty window");
  band_lo = std::max(band_lo, cf.j0());
  band_hi = std::min(band_hi, cf.j_top());
  if (band_lo > band_hi) throw ConfigError("mutual_coherence: empty window");
  const int s = gf.s();
  const int two_s = 2 * s;
  const int g = next_fast_size(6 * s + 4);

  std::vector<ProductEntry> prod;
  double best = 0;
  for (int jj = band_lo; jj <= band_hi; ++jj) {
    for (int l = 0; l < CurveletFrame::orientations(jj); ++l) {
      const auto& w = cf.wedge(jj, l);
      for (const auto& [n1, n2] : ns) {
        if (!build_product(cf, w, gf, n1, n2, prod)) continue;
        EnvProfile p = profile_from_product(prod, g);
        if (p.empty() || p.peak <= best * 0.5) continue;
        // locate the best sampled offset, then search realizable index
        // pairs around it
        double pbest = 0;
        int pi = 0, pk = 0;
        for (int i = 0; i < g; ++i)
          for (int k = 0; k < g; ++k) {
            const double v = p.q[std::size_t(i) * g + k];
            if (v > pbest) {
              pbest = v;
              pi = i;
              pk = k;
            }
          }
        if (pbest <= best) continue;
        const double t1 = double(pi) / g, t2 = double(pk) / g;
        // tau = b_k - x_m: scan k near the lattice points consistent with
        // small |tau| variation, m on the full position grid
        for (int dk2 = -2; dk2 <= 2; ++dk2)
          for (int dk1 = -2; dk1 <= 2; ++dk1)
            for (int dm1 = -1; dm1 <= 1; ++dm1)
              for (int dm2 = -1; dm2 <= 1; ++dm2) {
                // choose m near zero offset from b - tau
                // b = tau + x_m; pick a lattice k near an arbitrary base
                // and derive m from it
                const double xu0 = w.cls == 0 ? t1 : t2;
                const double xv0 = w.cls == 0 ? t2 : t1;
                int k2 = int(std::lround(xv0 * w.m2)) + dk2;
                const double k1f =
                    (xu0 + double(w.shear) * k2 / w.m2) * w.m1;
                int k1 = int(std::lround(k1f)) + dk1;
                double bx, by;
                lattice_position(w, k1, k2, bx, by);
                int m1 = int(std::lround((bx - t1) * two_s)) + dm1;
                int m2 = int(std::lround((by - t2) * two_s)) + dm2;
                CurveletIndex eta{jj, l, ((k1 % w.m1) + w.m1) % w.m1,
                                  ((k2 % w.m2) + w.m2) % w.m2};
                GaborIndex lam{((m1 % two_s) + two_s) % two_s,
                               ((m2 % two_s) + two_s) % two_s, n1, n2};
                best = std::max(best,
                                std::abs(pair_inner(cf, eta, gf, lam)));
              }
      }
    }
  }
  return best;
}

std::vector<std::pair<int, int>> m_set(int j, double theta, int s,
                                       const CurveletFrame& frame) {
  if (s < 1) throw ConfigError("m_set needs s >= 1");
  const double tr = frame.radial_window().transition();
  const double r_lo = std::pow(2.0, j - 1);
  const double r_hi = std::pow(2.0, j + tr);
  const double half_angle = CurveletFrame::orientation_spacing(j);
  std::vector<std::pair<int, int>> out;
  const int bound = int(std::ceil((r_hi + 1.0) / s)) + 1;
  // n is in M exactly when s R_{-theta} n lies within 1 of the wedge
  // support, i.e. within distance 1 of the sector rotated to theta
  for (int n1 = -bound; n1 <= bound; ++n1)
    for (int n2 = -bound; n2 <= bound; ++n2)
      if (sector_distance(double(s) * n1, double(s) * n2, theta, r_lo, r_hi,
                          half_angle) <= 1.0)
        out.emplace_back(n1, n2);
  return out;
}

}  // namespace ctsep
