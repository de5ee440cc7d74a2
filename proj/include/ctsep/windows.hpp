#pragma once

#include <cmath>

#include "ctsep/common.hpp"

namespace ctsep {

// C^3 smooth step on [0,1]: nu(0)=0, nu(1)=1, nu(t)+nu(1-t)=1.
inline double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * t * (35.0 - 84.0 * t + t * t * (70.0 - 20.0 * t));
}

// Radial profile W supported on [1/2, 2] with sum_j W^2(2^-j t) = 1 for all
// t > 0. In log2 coordinates u = log2(t) the profile rises over
// [-1, -1+transition], is 1 on [-1+transition, 0] and falls over
// [0, transition]; the transition fraction is a free shape parameter (the
// complementary sin/cos ramps keep the partition exact for any value).
class RadialWindow {
 public:
  explicit RadialWindow(double transition = kDefaultTransition)
      : a_(transition) {
    if (!(a_ > 0.0) || a_ > 1.0)
      throw ConfigError("radial window transition must be in (0,1]");
  }

  double operator()(double t) const {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    const double u = std::log2(t);
    if (u < -1.0 + a_)
      return std::sin(0.5 * kPi * smooth_step((u + 1.0) / a_));
    if (u <= 0.0) return 1.0;
    if (u < a_) return std::cos(0.5 * kPi * smooth_step(u / a_));
    return 0.0;
  }

  double transition() const { return a_; }

  // Chosen so the Lemma-1.2 style band expression tracks the directly
  // filtered texture norm at desk scales; see tests/filters and models.
  static constexpr double kDefaultTransition = 0.425;

 private:
  double a_;
};

// Angular profile V supported on (-1,1) with V(0)=1 and
// sum_l V^2(u - l) = 1; callers rescale by the orientation spacing.
class AngularWindow {
 public:
  double operator()(double u) const {
    const double x = std::abs(u);
    if (x >= 1.0) return 0.0;
    return std::cos(0.5 * kPi * smooth_step(x));
  }
};

// 1-D factor of the Gabor window spectrum: ghat(xi) = G(xi1) G(xi2),
// supp G in (-1,1), sum_n |G(xi+n)|^2 = 1. Same profile as AngularWindow.
class GaborWindow1d {
 public:
  double operator()(double x) const { return v_(x); }

 private:
  AngularWindow v_;
};

}  // namespace ctsep
