#include "ctsep/separation.hpp"

namespace ctsep {

namespace {

double l1_norm(const std::vector<cpx>& v) {
  double t = 0;
  for (const auto& z : v) t += std::abs(z);
  return t;
}

inline cpx soft(cpx w, double t) {
  const double a = std::abs(w);
  if (a <= t) return cpx(0);
  return w * (1.0 - t / a);
}

}  // namespace

double sep_objective(const SepProblem& p, const std::vector<cpx>& s1,
                     const std::vector<cpx>& s2) {
  std::vector<cpx> c1(p.a1.out_dim), c2(p.a2.out_dim);
  p.a1.apply(s1.data(), c1.data());
  p.a2.apply(s2.data(), c2.data());
  return l1_norm(c1) + l1_norm(c2);
}

SepSolution solve_sep(const SepProblem& p) {
  const std::size_t d = p.s.size();
  if (p.a1.in_dim != d || p.a2.in_dim != d)
    throw ConfigError("solve_sep: operator dimensions do not match signal");
  const SolverConfig& cfg = p.config;

  const double bsum = p.a1.bound_sq + p.a2.bound_sq;
  const double step = cfg.step_scale / std::sqrt(bsum);
  const double sigma = step, tau = step;

  // b2 = Phi2^T S, so that Phi2^T S2 = b2 - Phi2^T u
  std::vector<cpx> b2(p.a2.out_dim);
  p.a2.apply(p.s.data(), b2.data());

  std::vector<cpx> u(d), ubar(d), unew(d);
  std::vector<cpx> y1(p.a1.out_dim, cpx(0)), y2(p.a2.out_dim, cpx(0));
  std::vector<cpx> t1(p.a1.out_dim), t2(p.a2.out_dim);
  std::vector<cpx> g1(d), g2(d);

  // start from the better trivial split: u = S (all cartoon) vs u = 0
  std::vector<cpx> zero(d, cpx(0));
  const double obj_s = sep_objective(p, p.s, zero);
  const double obj_0 = sep_objective(p, zero, p.s);
  double best = std::min(obj_s, obj_0);
  std::vector<cpx> ubest;
  if (obj_s <= obj_0) {
    u = p.s;
    ubest = p.s;
  } else {
    u = zero;
    ubest = zero;
  }
  ubar = u;

  SepSolution sol;
  sol.objective_trace.push_back(best);

  int it = 0;
  bool converged = false;
  for (it = 1; it <= cfg.max_iters; ++it) {
    // dual ascent: y <- prox_{sigma F*}(y + sigma K ubar)
    p.a1.apply(ubar.data(), t1.data());
    for (std::size_t i = 0; i < y1.size(); ++i) {
      cpx z = y1[i] + sigma * t1[i];
      const double a = std::abs(z);
      y1[i] = a > 1.0 ? z / a : z;
    }
    p.a2.apply(ubar.data(), t2.data());
    for (std::size_t i = 0; i < y2.size(); ++i) {
      cpx z = y2[i] - sigma * t2[i];
      // prox of F2(y) = ||b2 + y||_1 via Moreau
      y2[i] = z - sigma * (soft(z / sigma + b2[i], 1.0 / sigma) - b2[i]);
    }
    // primal descent: u <- u - tau K^T y
    p.a1.adjoint(y1.data(), g1.data());
    p.a2.adjoint(y2.data(), g2.data());
    for (std::size_t i = 0; i < d; ++i) {
      unew[i] = u[i] - tau * (g1[i] - g2[i]);
      ubar[i] = 2.0 * unew[i] - u[i];
    }
    std::swap(u, unew);

    if (it % cfg.log_every == 0 || it == cfg.max_iters) {
      std::vector<cpx> s2(d);
      for (std::size_t i = 0; i < d; ++i) s2[i] = p.s[i] - u[i];
      const double obj = sep_objective(p, u, s2);
      if (obj < best) {
        best = obj;
        ubest = u;
      }
      sol.objective_trace.push_back(best);
      const std::size_t w = sol.objective_trace.size();
      if (int(w) > cfg.tol_window) {
        const double prev = sol.objective_trace[w - 1 - cfg.tol_window];
        const double rel = (prev - best) / std::max(best, 1e-300);
        if (rel < cfg.tol) {
          converged = true;
          break;
        }
      }
    }
  }

  sol.iterations = std::min(it, cfg.max_iters);
  sol.converged = converged;
  sol.objective = best;
  sol.s1 = std::move(ubest);
  sol.s2.resize(d);
  for (std::size_t i = 0; i < d; ++i) sol.s2[i] = p.s[i] - sol.s1[i];
  sol.feasibility = 0.0;
  return sol;
}

}  // namespace ctsep
