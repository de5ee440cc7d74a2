#include "ctsep/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <thread>

#include "json.hpp"

namespace ctsep {

void SweepConfig::validate() const {
  GridSpec g(grid_n);
  if (j_lo < 2 || j_hi < j_lo)
    throw ConfigError("sweep scale range invalid");
  if ((1 << (j_hi + 1)) > grid_n / 2)
    throw ConfigError("sweep scale range does not fit the grid "
                      "(need 2^{j_hi+1} <= N/2)");
  if (!(delta > 0)) throw ConfigError("delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.125))
    throw ConfigError("epsilon must lie in (0, 1/8)");
  if (!(margin > 0)) throw ConfigError("schedule margin must be positive");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

namespace {

Spectrum crop_spectrum(const Spectrum& s, int n_small) {
  GridSpec g(n_small);
  Spectrum out(g, Domain::Frequency);
  for (int x1 = -n_small / 2; x1 < n_small / 2; ++x1)
    for (int x2 = -n_small / 2; x2 < n_small / 2; ++x2)
      out.atf(x1, x2) = s.atf(x1, x2);
  return out;
}

int scale_grid_n(const SweepConfig& cfg, int j) {
  return std::min(1 << (j + 3), cfg.grid_n);
}

TextureSpec texture_spec_for(const SweepConfig& cfg, int s) {
  TextureSpec t;
  t.delta = cfg.delta;
  t.amplitude = cfg.texture_amplitude;
  t.phase_rule = cfg.phase_rule;
  t.seed = cfg.seed;
  t.size = s;
  return t;
}

}  // namespace

ScaleProblem build_scale_problem(const SweepConfig& cfg, int j) {
  ScaleProblem p;
  p.j = j;
  GridSpec big(cfg.grid_n);
  RadialWindow w(cfg.radial_transition);

  Cartoon cartoon = build_cartoon(cfg.cartoon, big);
  p.boundary = std::move(cartoon.boundary);

  TextureSpec tspec = texture_spec_for(cfg, 1);
  p.s = cfg.numeric_matching ? energy_match_numeric(j, tspec)
                             : energy_match_closed_form(j, cfg.delta);
  tspec.size = p.s;
  Field texture = build_texture(tspec, big);

  Spectrum chat = fft(cartoon.field);
  Spectrum that = fft(texture);
  const double inv2j = 1.0 / double(1 << j);
  for (int i1 = 0; i1 < big.n; ++i1) {
    const double x1 = big.freq_of_index(i1);
    for (int i2 = 0; i2 < big.n; ++i2) {
      const double x2 = big.freq_of_index(i2);
      const double wv = w(std::hypot(x1, x2) * inv2j);
      chat.at(i1, i2) *= wv;
      that.at(i1, i2) *= wv;
    }
  }
  const int nj = scale_grid_n(cfg, j);
  p.grid = GridSpec(nj);
  p.c_band = crop_spectrum(chat, nj);
  p.t_band = crop_spectrum(that, nj);
  return p;
}

namespace {

struct ScaleResult {
  SweepRecord record;
  ScaleImages images;
};

ScaleResult run_one_scale(const SweepConfig& cfg, int j, bool want_images) {
  const auto t0 = std::chrono::steady_clock::now();
  ScaleProblem sp = build_scale_problem(cfg, j);
  const int nj = sp.grid.n;

  CurveletFrame cf(sp.grid, 3, -1, RadialWindow(cfg.radial_transition));
  GaborFrame gf(sp.grid, sp.s);

  SweepRecord rec;
  rec.j = j;
  rec.s = sp.s;
  rec.norm_c2 = sp.c_band.norm2_sq();
  rec.norm_t2 = sp.t_band.norm2_sq();

  // (Sep) on the scale band with the banded frame operators
  SepProblem prob;
  prob.a1 = curvelet_operator(cf, j - 1, j + 1, false);
  auto gabor_ns = gf.band_modulations(std::pow(2.0, j - 2),
                                      std::pow(2.0, j + 2));
  prob.a2 = gabor_operator(gf, gabor_ns);
  prob.config = cfg.solver;
  prob.s.resize(sp.grid.size());
  for (std::size_t i = 0; i < prob.s.size(); ++i)
    prob.s[i] = sp.c_band[i] + sp.t_band[i];
  SepSolution sol = solve_sep(prob);
  rec.iters = sol.iterations;
  rec.solver_converged = sol.converged;

  Spectrum c_star = to_spectrum(sol.s1, sp.grid);
  Spectrum t_star = to_spectrum(sol.s2, sp.grid);
  double err_c = 0, err_t = 0;
  for (std::size_t i = 0; i < sp.grid.size(); ++i) {
    err_c += std::norm(c_star[i] - sp.c_band[i]);
    err_t += std::norm(t_star[i] - sp.t_band[i]);
  }
  err_c = std::sqrt(err_c);
  err_t = std::sqrt(err_t);
  const double denom = std::sqrt(rec.norm_c2) + std::sqrt(rec.norm_t2);
  rec.rel_error = denom > 0 ? (err_c + err_t) / denom : 0.0;

  // diagnostics: relative sparsity and cluster coherence
  CurveletCluster s1 = build_curvelet_cluster(cf, j, cfg.epsilon, sp.boundary);
  RadiiSchedule sched{cfg.delta, cfg.margin, cfg.c1, cfg.c2};
  GaborCluster s2 = build_gabor_cluster(j, sched, gf);

  CurveletCoefs c_coefs = cf.analyze(sp.c_band, j - 1, j + 1, false);
  rec.delta1 = relative_sparsity(c_coefs, s1);
  auto t_ns = gf.band_modulations(std::pow(2.0, j - 1), std::pow(2.0, j + 1));
  GaborCoefs t_coefs = gf.analyze(sp.t_band, t_ns);
  rec.delta2 = relative_sparsity(t_coefs, s2);

  rec.muc1 = cluster_coherence(cf, s1, gf, t_ns);
  rec.muc2 = cluster_coherence(gf, s2, cf, j - 1, j + 1);

  const double mu = std::max(rec.muc1, rec.muc2);
  rec.prop_bound = error_bound(rec.delta1, rec.delta2, mu);

  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_ms =
      std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
      1000.0;

  ScaleResult out;
  out.record = rec;
  if (want_images) {
    out.images.j = j;
    out.images.c = ifft(sp.c_band);
    out.images.t = ifft(sp.t_band);
    out.images.c_star = ifft(c_star);
    out.images.t_star = ifft(t_star);
    Spectrum res(sp.grid, Domain::Frequency);
    for (std::size_t i = 0; i < res.size(); ++i)
      res[i] = sp.c_band[i] - c_star[i];
    out.images.residual = ifft(res);
  }
  (void)nj;
  return out;
}

}  // namespace

SweepOutput run_scale_sweep_full(const SweepConfig& cfg) {
  cfg.validate();
  const int n_scales = cfg.j_hi - cfg.j_lo + 1;
  const bool want_images = cfg.write_pngs && !cfg.out_dir.empty();

  std::vector<std::optional<ScaleResult>> slots(n_scales);
  std::vector<std::string> errors(n_scales);
  int workers = cfg.threads > 0
                    ? cfg.threads
                    : int(std::min<unsigned>(std::thread::hardware_concurrency()
                                                 ? std::thread::hardware_concurrency()
                                                 : 1,
                                             unsigned(n_scales)));
  workers = std::max(1, std::min(workers, n_scales));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_scales) return;
      try {
        slots[idx] = run_one_scale(cfg, cfg.j_lo + idx, want_images);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  SweepOutput out;
  std::string first_error;
  for (int i = 0; i < n_scales; ++i) {
    if (slots[i]) {
      out.records.push_back(slots[i]->record);
      if (want_images) out.images.push_back(std::move(slots[i]->images));
    } else if (first_error.empty()) {
      first_error = errors[i];
    }
  }
  if (!first_error.empty()) {
    // flush whatever completed before propagating
    if (!cfg.out_dir.empty())
      write_report(out.records, out.images, cfg.out_dir);
    throw NumericError("scale sweep failed: " + first_error);
  }
  if (!cfg.out_dir.empty()) write_report(out.records, out.images, cfg.out_dir);
  return out;
}

std::vector<SweepRecord> run_scale_sweep(const SweepConfig& cfg) {
  return run_scale_sweep_full(cfg).records;
}

void write_report(const std::vector<SweepRecord>& records,
                  const std::vector<ScaleImages>& images,
                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " +
                        ec.message());
  write_text_file(out_dir + "/records.csv", records_to_csv(records));
  write_text_file(out_dir + "/records.json", records_to_json(records));
  if (!images.empty()) {
    fs::create_directories(out_dir + "/images", ec);
    if (ec) throw IoError("cannot create image directory: " + ec.message());
    nlohmann::ordered_json scales = nlohmann::ordered_json::array();
    for (const auto& im : images) {
      nlohmann::ordered_json o;
      o["j"] = im.j;
      const std::string base = out_dir + "/images/j" + std::to_string(im.j);
      o["C"] = write_png_gray(base + "_C.png", im.c);
      o["T"] = write_png_gray(base + "_T.png", im.t);
      o["C_star"] = write_png_gray(base + "_C_star.png", im.c_star);
      o["T_star"] = write_png_gray(base + "_T_star.png", im.t_star);
      o["residual"] = write_png_gray(base + "_residual.png", im.residual);
      scales.push_back(o);
    }
    write_text_file(out_dir + "/images.json", scales.dump(2) + "\n");
  }
}

double slope_check(const std::vector<SweepRecord>& records,
                   const std::function<double(const SweepRecord&)>& sel) {
  if (records.size() < 3)
    throw ConfigError("slope_check needs at least 3 records");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(records.size());
  for (const auto& r : records) {
    const double x = r.j;
    const double v = sel(r);
    if (!(v > 0)) throw NumericError("slope_check: nonpositive value");
    const double y = std::log2(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayEnvelopeReport decay_envelope_check(int j_lo, int j_hi, int samples,
                                         std::uint64_t seed, double delta,
                                         int max_grid) {
  if (samples < 1) throw ConfigError("decay_envelope_check needs samples >= 1");
  DecayEnvelopeReport rep;
  double lo = 1e300, hi = 0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const int nj = std::min(1 << (j + 3), max_grid);
    GridSpec g(nj);
    CurveletFrame cf(g);
    const int s = energy_match_closed_form(j, delta);
    GaborFrame gf(g, s);
    auto ns = gf.band_modulations(std::pow(2.0, j - 1), std::pow(2.0, j + 1));
    if (ns.empty()) ns.emplace_back(0, 0);
    Rng rng(seed * 1315423911ULL + std::uint64_t(j));
    double mx = 0;
    for (int i = 0; i < samples; ++i) {
      const int l = int(rng.below(CurveletFrame::orientations(j)));
      const auto& w = cf.wedge(j, l);
      CurveletIndex eta{j, l, int(rng.below(std::uint64_t(w.m1))),
                        int(rng.below(std::uint64_t(w.m2)))};
      const auto [n1, n2] = ns[rng.below(ns.size())];
      GaborIndex lam{int(rng.below(std::uint64_t(2 * s))),
                     int(rng.below(std::uint64_t(2 * s))), n1, n2};
      mx = std::max(mx, std::abs(pair_inner(cf, eta, gf, lam)));
    }
    DecayEnvelopeReport::PerScale ps;
    ps.j = j;
    ps.s = s;
    ps.max_abs = mx;
    ps.normalized = mx / std::pow(2.0, -0.25 * j);
    rep.scales.push_back(ps);
    lo = std::min(lo, ps.normalized);
    hi = std::max(hi, ps.normalized);
  }
  rep.band_ratio = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

// ------------------------------------------------------------------ config

namespace {

void check_keys(const nlohmann::json& o,
                std::initializer_list<const char*> keys,
                const std::string& where) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool ok = false;
    for (const char* k : keys)
      if (it.key() == k) ok = true;
    if (!ok)
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
  }
}

BumpProfile bump_from_json(const nlohmann::json& o, const std::string& where) {
  check_keys(o, {"amplitude", "center", "plateau", "outer"}, where);
  BumpProfile b;
  if (o.contains("amplitude")) b.amplitude = o.at("amplitude").get<double>();
  if (o.contains("center")) {
    b.center_x = o.at("center").at(0).get<double>();
    b.center_y = o.at("center").at(1).get<double>();
  }
  if (o.contains("plateau")) b.r_plateau = o.at("plateau").get<double>();
  if (o.contains("outer")) b.r_outer = o.at("outer").get<double>();
  return b;
}

nlohmann::ordered_json bump_to_json(const BumpProfile& b) {
  nlohmann::ordered_json o;
  o["amplitude"] = b.amplitude;
  o["center"] = {b.center_x, b.center_y};
  o["plateau"] = b.r_plateau;
  o["outer"] = b.r_outer;
  return o;
}

}  // namespace

SweepConfig config_from_json(const std::string& text) {
  nlohmann::json o;
  try {
    o = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SweepConfig c;
  check_keys(o,
             {"grid", "scales", "delta", "seed", "out_dir", "threads",
              "write_pngs", "numeric_matching", "texture", "cartoon",
              "schedule", "solver", "radial_transition"},
             "config");
  if (o.contains("grid")) c.grid_n = o.at("grid").get<int>();
  if (o.contains("scales")) {
    c.j_lo = o.at("scales").at(0).get<int>();
    c.j_hi = o.at("scales").at(1).get<int>();
  }
  if (o.contains("delta")) c.delta = o.at("delta").get<double>();
  if (o.contains("seed")) c.seed = o.at("seed").get<std::uint64_t>();
  if (o.contains("out_dir")) c.out_dir = o.at("out_dir").get<std::string>();
  if (o.contains("threads")) c.threads = o.at("threads").get<int>();
  if (o.contains("write_pngs")) c.write_pngs = o.at("write_pngs").get<bool>();
  if (o.contains("numeric_matching"))
    c.numeric_matching = o.at("numeric_matching").get<bool>();
  if (o.contains("radial_transition"))
    c.radial_transition = o.at("radial_transition").get<double>();
  if (o.contains("texture")) {
    const auto& t = o.at("texture");
    check_keys(t, {"amplitude", "phase_rule"}, "texture");
    if (t.contains("amplitude"))
      c.texture_amplitude = t.at("amplitude").get<double>();
    if (t.contains("phase_rule")) {
      const std::string p = t.at("phase_rule").get<std::string>();
      if (p == "random")
        c.phase_rule = PhaseRule::Random;
      else if (p == "positive")
        c.phase_rule = PhaseRule::Positive;
      else
        throw ConfigError("phase_rule must be 'random' or 'positive'");
    }
  }
  if (o.contains("cartoon")) {
    const auto& k = o.at("cartoon");
    check_keys(k, {"center", "ellipse", "f0", "f1"}, "cartoon");
    if (k.contains("center")) {
      c.cartoon.curve.center_x = k.at("center").at(0).get<double>();
      c.cartoon.curve.center_y = k.at("center").at(1).get<double>();
    }
    if (k.contains("ellipse")) {
      c.cartoon.curve.ell_a = k.at("ellipse").at(0).get<double>();
      c.cartoon.curve.ell_b = k.at("ellipse").at(1).get<double>();
      c.cartoon.curve.ell_phi = k.at("ellipse").at(2).get<double>();
    }
    if (k.contains("f0")) c.cartoon.f0 = bump_from_json(k.at("f0"), "f0");
    if (k.contains("f1")) c.cartoon.f1 = bump_from_json(k.at("f1"), "f1");
  }
  if (o.contains("schedule")) {
    const auto& s = o.at("schedule");
    check_keys(s, {"epsilon", "margin", "c1", "c2"}, "schedule");
    if (s.contains("epsilon")) c.epsilon = s.at("epsilon").get<double>();
    if (s.contains("margin")) c.margin = s.at("margin").get<double>();
    if (s.contains("c1")) c.c1 = s.at("c1").get<double>();
    if (s.contains("c2")) c.c2 = s.at("c2").get<double>();
  }
  if (o.contains("solver")) {
    const auto& s = o.at("solver");
    check_keys(s, {"max_iters", "tol", "tol_window", "log_every",
                   "step_scale"},
               "solver");
    if (s.contains("max_iters"))
      c.solver.max_iters = s.at("max_iters").get<int>();
    if (s.contains("tol")) c.solver.tol = s.at("tol").get<double>();
    if (s.contains("tol_window"))
      c.solver.tol_window = s.at("tol_window").get<int>();
    if (s.contains("log_every"))
      c.solver.log_every = s.at("log_every").get<int>();
    if (s.contains("step_scale"))
      c.solver.step_scale = s.at("step_scale").get<double>();
  }
  return c;
}

std::string config_to_json(const SweepConfig& c) {
  nlohmann::ordered_json o;
  o["grid"] = c.grid_n;
  o["scales"] = {c.j_lo, c.j_hi};
  o["delta"] = c.delta;
  o["seed"] = c.seed;
  o["out_dir"] = c.out_dir;
  o["threads"] = c.threads;
  o["write_pngs"] = c.write_pngs;
  o["numeric_matching"] = c.numeric_matching;
  o["radial_transition"] = c.radial_transition;
  o["texture"] = {{"amplitude", c.texture_amplitude},
                  {"phase_rule",
                   c.phase_rule == PhaseRule::Random ? "random" : "positive"}};
  nlohmann::ordered_json k;
  k["center"] = {c.cartoon.curve.center_x, c.cartoon.curve.center_y};
  k["ellipse"] = {c.cartoon.curve.ell_a, c.cartoon.curve.ell_b,
                  c.cartoon.curve.ell_phi};
  k["f0"] = bump_to_json(c.cartoon.f0);
  k["f1"] = bump_to_json(c.cartoon.f1);
  o["cartoon"] = k;
  o["schedule"] = {{"epsilon", c.epsilon},
                   {"margin", c.margin},
                   {"c1", c.c1},
                   {"c2", c.c2}};
  o["solver"] = {{"max_iters", c.solver.max_iters},
                 {"tol", c.solver.tol},
                 {"tol_window", c.solver.tol_window},
                 {"log_every", c.solver.log_every},
                 {"step_scale", c.solver.step_scale}};
  return o.dump(2) + "\n";
}

}  // namespace ctsep
