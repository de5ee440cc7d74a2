#include "ctsep/gabor.hpp"

namespace ctsep {

namespace {
int floor_div(int a, int b) {  // b > 0
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int ceil_div(int a, int b) { return -floor_div(-a, b); }
}  // namespace

GaborFrame::GaborFrame(GridSpec grid, int s) : grid_(grid), s_(s) {
  if (s_ < 1) throw ConfigError("gabor size parameter must be a positive "
                                "integer");
  if (s_ > 2 * grid_.n)
    throw ConfigError("gabor size parameter too large for the grid");
  // Atom n occupies the open box (s n - s, s n + s) per axis; keep every
  // modulation whose box meets the fundamental domain [-N/2, N/2), which
  // is exactly what makes the windowed partition hold at every grid
  // frequency.
  const int half = grid_.n / 2;
  n_min_ = ceil_div(-half - s_ + 1, s_);
  n_max_ = floor_div(half - 2 + s_, s_);
}

bool GaborFrame::valid(const GaborIndex& ix) const {
  return ix.m1 >= 0 && ix.m1 < 2 * s_ && ix.m2 >= 0 && ix.m2 < 2 * s_ &&
         ix.n1 >= n_min_ && ix.n1 <= n_max_ && ix.n2 >= n_min_ &&
         ix.n2 <= n_max_;
}

double GaborFrame::window_value(int xi1, int xi2, int n1, int n2) const {
  const double w1 = g1_(double(xi1 - s_ * n1) / s_);
  const double w2 = g1_(double(xi2 - s_ * n2) / s_);
  return w1 * w2 / s_;
}

Spectrum GaborFrame::atom(const GaborIndex& ix) const {
  if (!valid(ix)) throw ConfigError("gabor index out of range");
  Spectrum a(grid_, Domain::Frequency);
  const int half = grid_.n / 2;
  const int lo1 = std::max(s_ * ix.n1 - s_ + 1, -half);
  const int hi1 = std::min(s_ * ix.n1 + s_ - 1, half - 1);
  const int lo2 = std::max(s_ * ix.n2 - s_ + 1, -half);
  const int hi2 = std::min(s_ * ix.n2 + s_ - 1, half - 1);
  const double step = kPi / s_;  // 2 pi / (2s)
  for (int x1 = lo1; x1 <= hi1; ++x1)
    for (int x2 = lo2; x2 <= hi2; ++x2) {
      const double w = window_value(x1, x2, ix.n1, ix.n2);
      if (w == 0.0) continue;
      const double phase = -step * (double(ix.m1) * x1 + double(ix.m2) * x2);
      a.atf(x1, x2) = std::polar(w, phase);
    }
  return a;
}

std::vector<std::pair<int, int>> GaborFrame::all_modulations() const {
  std::vector<std::pair<int, int>> ns;
  for (int a = n_min_; a <= n_max_; ++a)
    for (int b = n_min_; b <= n_max_; ++b) ns.emplace_back(a, b);
  return ns;
}

std::vector<std::pair<int, int>> GaborFrame::band_modulations(
    double r_lo, double r_hi) const {
  std::vector<std::pair<int, int>> ns;
  const double pad = std::sqrt(2.0) * (s_ - 1);
  for (int a = n_min_; a <= n_max_; ++a)
    for (int b = n_min_; b <= n_max_; ++b) {
      const double r = std::hypot(double(s_) * a, double(s_) * b);
      if (r + pad > r_lo && r - pad < r_hi) ns.emplace_back(a, b);
    }
  return ns;
}

GaborCoefs GaborFrame::analyze(
    const Spectrum& fhat, const std::vector<std::pair<int, int>>& ns) const {
  if (fhat.grid() != grid_) throw ConfigError("gabor analysis: grid mismatch");
  GaborCoefs out(s_, ns);
  const int two_s = 2 * s_;
  const int half = grid_.n / 2;
  const double scale = parseval_scale();
  std::vector<cpx> buf(std::size_t(two_s) * two_s);
  for (std::size_t bi = 0; bi < ns.size(); ++bi) {
    const auto [a, b] = ns[bi];
    std::fill(buf.begin(), buf.end(), cpx(0));
    const int lo1 = std::max(s_ * a - s_ + 1, -half);
    const int hi1 = std::min(s_ * a + s_ - 1, half - 1);
    const int lo2 = std::max(s_ * b - s_ + 1, -half);
    const int hi2 = std::min(s_ * b + s_ - 1, half - 1);
    for (int x1 = lo1; x1 <= hi1; ++x1) {
      const double w1 = g1_(double(x1 - s_ * a) / s_);
      if (w1 == 0.0) continue;
      const int r1 = ((x1 % two_s) + two_s) % two_s;
      for (int x2 = lo2; x2 <= hi2; ++x2) {
        const double w2 = g1_(double(x2 - s_ * b) / s_);
        if (w2 == 0.0) continue;
        const int r2 = ((x2 % two_s) + two_s) % two_s;
        buf[std::size_t(r1) * two_s + r2] +=
            fhat.atf(x1, x2) * (scale * w1 * w2 / s_);
      }
    }
    // c(m) = sum_xi buf[xi mod 2s] e^{+2 pi i m.xi/(2s)}
    fft2_raw(buf.data(), two_s, two_s, +1);
    std::copy(buf.begin(), buf.end(), out.block(bi));
  }
  return out;
}

Spectrum GaborFrame::synthesize(const GaborCoefs& c) const {
  if (c.s() != s_) throw ConfigError("gabor synthesis: size mismatch");
  Spectrum out(grid_, Domain::Frequency);
  const int two_s = 2 * s_;
  const int half = grid_.n / 2;
  const double scale = parseval_scale();
  std::vector<cpx> buf(std::size_t(two_s) * two_s);
  const auto& ns = c.modulations();
  for (std::size_t bi = 0; bi < ns.size(); ++bi) {
    const auto [a, b] = ns[bi];
    std::copy(c.block(bi), c.block(bi) + c.block_elems(), buf.begin());
    fft2_raw(buf.data(), two_s, two_s, -1);
    const int lo1 = std::max(s_ * a - s_ + 1, -half);
    const int hi1 = std::min(s_ * a + s_ - 1, half - 1);
    const int lo2 = std::max(s_ * b - s_ + 1, -half);
    const int hi2 = std::min(s_ * b + s_ - 1, half - 1);
    for (int x1 = lo1; x1 <= hi1; ++x1) {
      const double w1 = g1_(double(x1 - s_ * a) / s_);
      if (w1 == 0.0) continue;
      const int r1 = ((x1 % two_s) + two_s) % two_s;
      for (int x2 = lo2; x2 <= hi2; ++x2) {
        const double w2 = g1_(double(x2 - s_ * b) / s_);
        if (w2 == 0.0) continue;
        const int r2 = ((x2 % two_s) + two_s) % two_s;
        out.atf(x1, x2) +=
            buf[std::size_t(r1) * two_s + r2] * (scale * w1 * w2 / s_);
      }
    }
  }
  return out;
}

}  // namespace ctsep
