#pragma once

#include "ctsep/frame_ops.hpp"

namespace ctsep {

struct SolverConfig {
  int max_iters = 5000;
  double tol = 1e-7;     // relative objective change over tol_window
  int tol_window = 10;   // recorded objective values
  int log_every = 1;     // objective evaluation cadence (iterations)
  double step_scale = 0.99;
};

// min ||Phi1^T S1||_1 + ||Phi2^T S2||_1  s.t.  S1 + S2 = S.
// a1, a2 are the analysis operators of two (near-)Parseval frames.
struct SepProblem {
  std::vector<cpx> s;
  LinOpC a1, a2;
  SolverConfig config;
};

struct SepSolution {
  std::vector<cpx> s1, s2;  // s2 = s - s1 exactly
  std::vector<double> objective_trace;  // objective of the reported iterate
  double objective = 0;
  int iterations = 0;
  double feasibility = 0;
  bool converged = false;
};

double sep_objective(const SepProblem& p, const std::vector<cpx>& s1,
                     const std::vector<cpx>& s2);

// First-order primal-dual proximal splitting on the reduced variable
// u = S1 (S2 = S - u), with the stacked analysis operator
// K u = (Phi1^T u, -Phi2^T u). The reported iterate is the best one seen,
// so the objective trace is non-increasing by construction.
SepSolution solve_sep(const SepProblem& p);

}  // namespace ctsep
