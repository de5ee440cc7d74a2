#pragma once

#include <functional>

#include "ctsep/curvelet.hpp"
#include "ctsep/gabor.hpp"

namespace ctsep {

// Analysis operator with its adjoint (synthesis), acting on flat complex
// vectors. in_dim is the field dimension, out_dim the coefficient count.
struct LinOpC {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::function<void(const cpx*, cpx*)> apply;    // coeffs = Phi^T field
  std::function<void(const cpx*, cpx*)> adjoint;  // field  = Phi  coeffs
  double bound_sq = 1.0;  // upper bound on ||Phi^T||^2 (frame bound B)
};

// Adapters. Fields are passed around as flat frequency-domain vectors so a
// frame-agnostic solver can drive both frames and small matrix instances.
LinOpC curvelet_operator(const CurveletFrame& frame, int band_lo, int band_hi,
                         bool include_lowpass);
LinOpC gabor_operator(const GaborFrame& frame,
                      std::vector<std::pair<int, int>> ns);
// rows-of-matrix analysis operator (real matrix, p x d)
LinOpC matrix_operator(const std::vector<std::vector<double>>& a);

std::vector<cpx> to_vec(const Spectrum& s);
Spectrum to_spectrum(const std::vector<cpx>& v, GridSpec g);

struct FrameBounds {
  double a = 0;
  double b = 0;
};

// A = min, B = max of ||Phi^T f||^2 / ||f||^2 over random trial vectors,
// tightened by power iteration on the frame operator.
FrameBounds measure_frame_bounds(const LinOpC& op, int trials,
                                 std::uint64_t seed = 1234,
                                 int power_iters = 30);

}  // namespace ctsep
