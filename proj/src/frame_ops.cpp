#include "ctsep/frame_ops.hpp"

namespace ctsep {

std::vector<cpx> to_vec(const Spectrum& s) {
  return std::vector<cpx>(s.data(), s.data() + s.size());
}

Spectrum to_spectrum(const std::vector<cpx>& v, GridSpec g) {
  if (v.size() != g.size())
    throw ConfigError("vector size does not match grid");
  Spectrum s(g, Domain::Frequency);
  std::copy(v.begin(), v.end(), s.data());
  return s;
}

LinOpC curvelet_operator(const CurveletFrame& frame, int band_lo, int band_hi,
                         bool include_lowpass) {
  // probe the layout once to get the coefficient count
  CurveletCoefs probe(&frame, std::max(band_lo, frame.j0()),
                      std::min(band_hi, frame.j_top()), include_lowpass);
  LinOpC op;
  op.in_dim = frame.grid().size();
  op.out_dim = probe.size();
  op.bound_sq = 1.0;  // exact Parseval by construction
  const GridSpec g = frame.grid();
  const CurveletFrame* fr = &frame;
  op.apply = [fr, g, band_lo, band_hi, include_lowpass](const cpx* in,
                                                        cpx* out) {
    Spectrum s(g, Domain::Frequency);
    std::copy(in, in + g.size(), s.data());
    CurveletCoefs c = fr->analyze(s, band_lo, band_hi, include_lowpass);
    std::copy(c.data(), c.data() + c.size(), out);
  };
  op.adjoint = [fr, g, band_lo, band_hi, include_lowpass](const cpx* in,
                                                          cpx* out) {
    CurveletCoefs c(fr, std::max(band_lo, fr->j0()),
                    std::min(band_hi, fr->j_top()), include_lowpass);
    std::copy(in, in + c.size(), c.data());
    Spectrum s = fr->synthesize(c);
    std::copy(s.data(), s.data() + s.size(), out);
  };
  return op;
}

LinOpC gabor_operator(const GaborFrame& frame,
                      std::vector<std::pair<int, int>> ns) {
  LinOpC op;
  const GridSpec g = frame.grid();
  op.in_dim = g.size();
  op.out_dim = std::size_t(4) * frame.s() * frame.s() * ns.size();
  op.bound_sq = 1.0;
  const GaborFrame* fr = &frame;
  auto ns_ptr = std::make_shared<std::vector<std::pair<int, int>>>(
      std::move(ns));
  op.apply = [fr, g, ns_ptr](const cpx* in, cpx* out) {
    Spectrum s(g, Domain::Frequency);
    std::copy(in, in + g.size(), s.data());
    GaborCoefs c = fr->analyze(s, *ns_ptr);
    std::copy(c.data(), c.data() + c.size(), out);
  };
  op.adjoint = [fr, g, ns_ptr](const cpx* in, cpx* out) {
    GaborCoefs c(fr->s(), *ns_ptr);
    std::copy(in, in + c.size(), c.data());
    Spectrum s = fr->synthesize(c);
    std::copy(s.data(), s.data() + s.size(), out);
  };
  return op;
}

LinOpC matrix_operator(const std::vector<std::vector<double>>& a) {
  LinOpC op;
  const std::size_t p = a.size();
  const std::size_t d = p ? a[0].size() : 0;
  op.in_dim = d;
  op.out_dim = p;
  auto m = std::make_shared<std::vector<std::vector<double>>>(a);
  double fro = 0;
  for (const auto& row : a)
    for (double x : row) fro += x * x;
  op.bound_sq = fro;  // crude but valid upper bound
  op.apply = [m, p, d](const cpx* in, cpx* out) {
    for (std::size_t i = 0; i < p; ++i) {
      cpx acc = 0;
      for (std::size_t k = 0; k < d; ++k) acc += (*m)[i][k] * in[k];
      out[i] = acc;
    }
  };
  op.adjoint = [m, p, d](const cpx* in, cpx* out) {
    for (std::size_t k = 0; k < d; ++k) out[k] = 0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < d; ++k) out[k] += (*m)[i][k] * in[i];
  };
  return op;
}

FrameBounds measure_frame_bounds(const LinOpC& op, int trials,
                                 std::uint64_t seed, int power_iters) {
  if (trials < 1) throw ConfigError("measure_frame_bounds needs trials >= 1");
  Rng rng(seed);
  std::vector<cpx> f(op.in_dim), c(op.out_dim), back(op.in_dim);
  auto quotient = [&](const std::vector<cpx>& x) {
    double nx = 0;
    for (const auto& z : x) nx += std::norm(z);
    op.apply(x.data(), c.data());
    double nc = 0;
    for (const auto& z : c) nc += std::norm(z);
    return nc / nx;
  };

  double a = 1e300, b = -1e300;
  std::vector<cpx> fa, fb;
  for (int t = 0; t < trials; ++t) {
    for (auto& z : f) z = cpx(rng.gaussian(), rng.gaussian());
    const double q = quotient(f);
    if (q < a) {
      a = q;
      fa = f;
    }
    if (q > b) {
      b = q;
      fb = f;
    }
  }

  // refine B: power iteration on S = Phi Phi^T
  f = fb;
  for (int it = 0; it < power_iters; ++it) {
    op.apply(f.data(), c.data());
    op.adjoint(c.data(), back.data());
    double nb = 0;
    for (const auto& z : back) nb += std::norm(z);
    nb = std::sqrt(nb);
    if (nb == 0) break;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = back[i] / nb;
  }
  b = std::max(b, quotient(f));

  // refine A: power iteration on cI - S pushes toward the smallest
  // eigenvalue of S
  const double shift = 1.25 * b + 1e-12;
  f = fa;
  for (int it = 0; it < power_iters; ++it) {
    op.apply(f.data(), c.data());
    op.adjoint(c.data(), back.data());
    double nrm = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      back[i] = shift * f[i] - back[i];
      nrm += std::norm(back[i]);
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0) break;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = back[i] / nrm;
  }
  a = std::min(a, quotient(f));
  return {a, b};
}

}  // namespace ctsep
