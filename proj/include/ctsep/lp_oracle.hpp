#pragma once

#include <vector>

#include "ctsep/common.hpp"

namespace ctsep {

// Real matrix frame pair for small oracle instances: rows of a_i are the
// analysis functionals (a_i = Phi_i^T, p_i x d).
struct MatrixFramePair {
  std::vector<std::vector<double>> a1, a2;
};

struct LpSolution {
  std::vector<double> s1, s2;
  double objective = 0;
};

// Exact minimizer of  ||A1 x||_1 + ||A2 (s - x)||_1  via a dense simplex on
// the positive/negative part splitting. Independent of solve_sep.
LpSolution lp_oracle(const MatrixFramePair& frames,
                     const std::vector<double>& s);

// Random d x p Parseval frame (rows of an orthogonal matrix); returns the
// analysis matrix Phi^T (p x d).
std::vector<std::vector<double>> random_parseval_analysis(int d, int p,
                                                          Rng& rng);

// self-contained dense simplex:  max c^T x  s.t.  A x <= b, x >= 0.
// Returns +inf if unbounded, -inf if infeasible.
double simplex_solve(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c, std::vector<double>& x);

}  // namespace ctsep
