#pragma once

#include <functional>
#include <optional>

#include "ctsep/filters.hpp"
#include "ctsep/grid.hpp"

namespace ctsep {

// Smooth compactly supported radial bump: 1 on [0, r_plateau], smooth-step
// down to 0 at r_outer.
struct BumpProfile {
  double amplitude = 0.0;
  double center_x = 0.5, center_y = 0.5;
  double r_plateau = 0.0;
  double r_outer = 0.0;

  double operator()(double x, double y) const {
    if (amplitude == 0.0) return 0.0;
    const double r = std::hypot(x - center_x, y - center_y);
    if (r >= r_outer) return 0.0;
    if (r <= r_plateau) return amplitude;
    return amplitude *
           (1.0 - smooth_step((r - r_plateau) / (r_outer - r_plateau)));
  }
};

// Closed boundary curve tau(t) = center + r(t) (cos t, sin t) with a
// positive trigonometric-polynomial radius. The default is an ellipse
// (every point has nonzero curvature, so the cartoon decay condition
// holds).
struct BoundaryCurve {
  double center_x = 0.5, center_y = 0.5;
  // radius r(t) = c0 + sum_k (a_k cos kt + b_k sin kt); ellipse handled
  // separately for exactness.
  bool is_ellipse = true;
  double ell_a = 0.27, ell_b = 0.18, ell_phi = 0.35;
  std::vector<double> cos_coef;  // index k-1 -> a_k
  std::vector<double> sin_coef;  // index k-1 -> b_k
  double radius_c0 = 0.3;

  void point(double t, double& x, double& y) const;
  void derivative(double t, double& dx, double& dy) const;
  // curvature sign-checked positivity (strict convexity)
  bool strictly_convex(int samples = 4096) const;
  double max_radius() const;
};

struct BoundarySample {
  double x, y;      // position on the torus
  double tx, ty;    // unit tangent
  double nx, ny;    // unit normal
};

struct CartoonSpec {
  BoundaryCurve curve;
  BumpProfile f0;   // smooth background
  BumpProfile f1;   // jump profile; must be flat across the boundary
  int boundary_samples = 4096;

  static CartoonSpec default_spec();
};

struct Cartoon {
  Field field;
  std::vector<BoundarySample> boundary;  // empty when there is no jump
  double jump_amplitude = 0.0;
};

// Samples f0 + f1 . 1_{B_tau}; membership is decided by the winding number
// of the densely sampled boundary polygon.
Cartoon build_cartoon(const CartoonSpec& spec, GridSpec grid);

// winding-number membership test against a polygon (exposed for tests)
bool point_in_polygon(const std::vector<double>& px,
                      const std::vector<double>& py, double x, double y);

// Least-squares slope of log |Chat| (angular max per radial bin) against
// log |xi| over the usable band.
double fourier_decay_exponent(const Field& c);

// ---------------------------------------------------------------------------

enum class PhaseRule : std::uint8_t { Random = 0, Positive = 1 };

// Texture coefficient model |d_{m,n}| = amp * max(|m|,1)^-(2+delta)
//                                      * max(|n|,1)^-(2+delta).
struct TextureSpec {
  double delta = 2.0;
  double amplitude = kCalibratedAmplitude;
  PhaseRule phase_rule = PhaseRule::Random;
  std::uint64_t seed = 7;
  int size = 32;                   // s (positive integer)
  double spatial_truncation = 4.0;   // |m| <= spatial_truncation * s
  int frequency_truncation = 0;      // |s n| <= this; 0 means N/2 at build

  // Calibrated so that the Lemma 1.2 band expression for delta = 2 meets
  // the 2^-j energy level at the anchor scale j = 6, s = 32 (and so the
  // default cartoon and texture carry comparable filtered energy).
  static constexpr double kCalibratedAmplitude = 0.00825;

  static TextureSpec default_spec(double delta, int s, std::uint64_t seed);
};

// d_{m,n}: magnitude from the decay law, phase from the spec rule with
// d_{-m,-n} = conj(d_{m,n}) so that assembled fields are real.
cpx texture_coefficient(const TextureSpec& spec, int m1, int m2, int n1,
                        int n2);

Field build_texture(const TextureSpec& spec, GridSpec grid);

// s_j = round(2^{(1+2 delta)/(2+2 delta) j}), at least 1
int energy_match_closed_form(int j, double delta);

// Lemma 1.2 band expression
//   sum_{m,mt} e^{-|m-mt|/2} sum_{n in Z^2 cap A_{s,j}} d_{m,n} conj(d_{mt,n})
// evaluated exactly over the truncated index set; the annulus
// A_{s,j} = { 2^{j-1}/s < |n| < 2^{j+1}/s } is taken open to match the open
// support of the radial window.
double texture_band_norm(const TextureSpec& spec, int s, int j);

// Integer s minimizing |band expression - 2^-j| (monotone bracket + scan).
int energy_match_numeric(int j, const TextureSpec& spec, int s_min = 1,
                         int s_max = 4096);

struct AnnulusSpec {
  int j = 0;
  int s = 1;
  double inner() const { return double(1 << (j - 1)) / s; }
  double outer() const { return double(2 << j) / s; }
};

}  // namespace ctsep
