#pragma once

#include <functional>

#include "ctsep/coherence.hpp"
#include "ctsep/report.hpp"
#include "ctsep/separation.hpp"

namespace ctsep {

struct SweepConfig {
  int grid_n = 512;
  int j_lo = 4, j_hi = 7;
  double delta = 2.0;
  std::uint64_t seed = 20250810;
  std::string out_dir;
  int threads = 0;  // 0: one worker per scale up to the hardware count
  bool write_pngs = true;
  bool numeric_matching = false;

  CartoonSpec cartoon = CartoonSpec::default_spec();
  double texture_amplitude = TextureSpec::kCalibratedAmplitude;
  PhaseRule phase_rule = PhaseRule::Random;

  double epsilon = 1.0 / 16.0;  // cluster tube exponent, in (0, 1/8)
  double margin = 0.05;         // radii schedule margin exponent
  double c1 = 1.0, c2 = 1.0;

  SolverConfig solver;
  double radial_transition = RadialWindow::kDefaultTransition;

  void validate() const;
};

// JSON round trip for the config; unknown keys are rejected
SweepConfig config_from_json(const std::string& text);
std::string config_to_json(const SweepConfig& c);

struct ScaleImages {
  int j = 0;
  Field c, t, c_star, t_star, residual;
};

struct SweepOutput {
  std::vector<SweepRecord> records;
  std::vector<ScaleImages> images;
};

// One record per scale: build the energy-matched model pair, filter to the
// scale band, separate with the full (banded) frame pair, and measure all
// diagnostics. Scales run in parallel workers; results are deterministic
// for a fixed config and seed.
SweepOutput run_scale_sweep_full(const SweepConfig& cfg);
std::vector<SweepRecord> run_scale_sweep(const SweepConfig& cfg);

// writes records.csv, records.json, images/*.png and images.json (per-image
// normalization scales) under out_dir
void write_report(const std::vector<SweepRecord>& records,
                  const std::vector<ScaleImages>& images,
                  const std::string& out_dir);

// least-squares slope of log2(selector(record)) against j
double slope_check(const std::vector<SweepRecord>& records,
                   const std::function<double(const SweepRecord&)>& sel);

struct DecayEnvelopeReport {
  struct PerScale {
    int j = 0;
    int s = 0;
    double max_abs = 0;     // max sampled |<gamma, g>|
    double normalized = 0;  // max_abs / 2^{-j/4}
  };
  std::vector<PerScale> scales;
  double band_ratio = 0;  // max/min of normalized across scales
};

// samples |<gamma_eta, g_lambda>| over random overlapping index pairs per
// scale; the sample stream is prefix-stable in the count
DecayEnvelopeReport decay_envelope_check(int j_lo, int j_hi, int samples,
                                         std::uint64_t seed,
                                         double delta = 2.0,
                                         int max_grid = 512);

// per-scale helper shared by the sweep and the CLI `separate` subcommand
struct ScaleProblem {
  int j = 0;
  int s = 0;
  GridSpec grid;                 // decimated per-scale grid
  Spectrum c_band, t_band;       // filtered model components on that grid
  std::vector<BoundarySample> boundary;
};

ScaleProblem build_scale_problem(const SweepConfig& cfg, int j);

}  // namespace ctsep
