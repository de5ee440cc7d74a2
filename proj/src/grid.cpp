#include "ctsep/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ctsep {
namespace {

std::mutex g_plan_mutex;

struct PlanKey {
  int m1, m2, sign;
  bool operator<(const PlanKey& o) const {
    if (m1 != o.m1) return m1 < o.m1;
    if (m2 != o.m2) return m2 < o.m2;
    return sign < o.sign;
  }
};

// One cached plan per (size, sign), created with FFTW_ESTIMATE so the
// kernel choice (and thus summation order) is reproducible run to run.
// Execution uses the new-array interface on thread-local fftw-aligned
// scratch, so concurrent transforms are safe.
fftw_plan plan_for(int m1, int m2, int sign, fftw_complex* probe) {
  static std::map<PlanKey, fftw_plan>* cache =
      new std::map<PlanKey, fftw_plan>();
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  PlanKey key{m1, m2, sign};
  auto it = cache->find(key);
  if (it != cache->end()) return it->second;
  fftw_plan p = fftw_plan_dft_2d(m1, m2, probe, probe,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  if (!p) throw NumericError("fftw plan creation failed");
  (*cache)[key] = p;
  return p;
}

struct Scratch {
  fftw_complex* p = nullptr;
  std::size_t cap = 0;
  ~Scratch() {
    if (p) fftw_free(p);
  }
  fftw_complex* ensure(std::size_t n) {
    if (cap < n) {
      if (p) fftw_free(p);
      p = fftw_alloc_complex(n);
      cap = n;
    }
    return p;
  }
};

}  // namespace

void fft2_raw(cpx* data, int m1, int m2, int sign) {
  static thread_local Scratch scratch;
  const std::size_t len = std::size_t(m1) * m2;
  fftw_complex* buf = scratch.ensure(len);
  std::memcpy(buf, data, len * sizeof(cpx));
  fftw_plan plan = plan_for(m1, m2, sign, buf);
  fftw_execute_dft(plan, buf, buf);
  std::memcpy(data, buf, len * sizeof(cpx));
}

Spectrum fft(const Field& f) {
  if (f.domain() != Domain::Space)
    throw ConfigError("fft expects a space-domain field");
  Spectrum s(f.grid(), Domain::Frequency);
  std::memcpy(s.data(), f.data(), f.size() * sizeof(cpx));
  fft2_raw(s.data(), f.n(), f.n(), -1);
  const double scale = 1.0 / double(f.grid().size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= scale;
  return s;
}

Field ifft(const Spectrum& s) {
  if (s.domain() != Domain::Frequency)
    throw ConfigError("ifft expects a frequency-domain spectrum");
  Field f(s.grid(), Domain::Space);
  std::memcpy(f.data(), s.data(), s.size() * sizeof(cpx));
  fft2_raw(f.data(), s.n(), s.n(), +1);
  return f;
}

Field random_field(GridSpec g, Rng& rng, bool real_valued) {
  Field f(g, Domain::Space);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double re = rng.gaussian();
    double im = real_valued ? 0.0 : rng.gaussian();
    f[i] = cpx(re, im);
  }
  return f;
}

}  // namespace ctsep
