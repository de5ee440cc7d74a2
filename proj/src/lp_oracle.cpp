#include "ctsep/lp_oracle.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace ctsep {

namespace {

// Dense two-phase simplex (codebook style), max c^T x s.t. Ax <= b, x >= 0.
struct Simplex {
  static constexpr double EPS = 1e-9;
  int m, n;
  std::vector<int> nb, bs;
  std::vector<std::vector<double>> d;

  Simplex(const std::vector<std::vector<double>>& a,
          const std::vector<double>& b, const std::vector<double>& c)
      : m(int(b.size())), n(int(c.size())), nb(n + 1), bs(m),
        d(m + 2, std::vector<double>(n + 2)) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = a[i][j];
    for (int i = 0; i < m; ++i) {
      bs[i] = n + i;
      d[i][n] = -1;
      d[i][n + 1] = b[i];
    }
    for (int j = 0; j < n; ++j) {
      nb[j] = j;
      d[m][j] = -c[j];
    }
    nb[n] = -1;
    d[m + 1][n] = 1;
  }

  void pivot(int r, int s) {
    double* a = d[r].data();
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m + 2; ++i) {
      if (i != r && std::abs(d[i][s]) > EPS) {
        double* bb = d[i].data();
        const double inv2 = bb[s] * inv;
        for (int j = 0; j < n + 2; ++j) bb[j] -= a[j] * inv2;
        bb[s] = a[s] * inv2;
      }
    }
    for (int j = 0; j < n + 2; ++j)
      if (j != s) d[r][j] *= inv;
    for (int i = 0; i < m + 2; ++i)
      if (i != r) d[i][s] *= -inv;
    d[r][s] = inv;
    std::swap(bs[r], nb[s]);
  }

  bool phase(int ph) {
    const int x = m + ph - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j < n + 1; ++j) {
        if (nb[j] == -ph) continue;
        if (s == -1 || std::make_pair(d[x][j], nb[j]) <
                           std::make_pair(d[x][s], nb[s]))
          s = j;
      }
      if (d[x][s] >= -EPS) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (d[i][s] <= EPS) continue;
        if (r == -1 ||
            std::make_pair(d[i][n + 1] / d[i][s], bs[i]) <
                std::make_pair(d[r][n + 1] / d[r][s], bs[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  double solve(std::vector<double>& x) {
    int r = 0;
    for (int i = 1; i < m; ++i)
      if (d[i][n + 1] < d[r][n + 1]) r = i;
    if (d[r][n + 1] < -EPS) {
      pivot(r, n);
      if (!phase(2) || d[m + 1][n + 1] < -EPS)
        return -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        if (bs[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n; ++j)
            if (s == -1 || std::make_pair(d[i][j], nb[j]) <
                               std::make_pair(d[i][s], nb[s]))
              s = j;
          pivot(i, s);
        }
    }
    const bool ok = phase(1);
    x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
      if (bs[i] < n) x[bs[i]] = d[i][n + 1];
    return ok ? d[m][n + 1] : std::numeric_limits<double>::infinity();
  }
};

}  // namespace

double simplex_solve(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c, std::vector<double>& x) {
  Simplex s(a, b, c);
  return s.solve(x);
}

LpSolution lp_oracle(const MatrixFramePair& frames,
                     const std::vector<double>& s) {
  const int d = int(s.size());
  const int p1 = int(frames.a1.size());
  const int p2 = int(frames.a2.size());
  if (d > 16)
    throw ConfigError("lp_oracle is restricted to ambient dimension <= 16");
  for (const auto& row : frames.a1)
    if (int(row.size()) != d) throw ConfigError("lp_oracle: a1 shape");
  for (const auto& row : frames.a2)
    if (int(row.size()) != d) throw ConfigError("lp_oracle: a2 shape");

  // variables z = (xp, xn, t1, t2) >= 0, x = xp - xn
  const int nv = 2 * d + p1 + p2;
  const int nr = 2 * p1 + 2 * p2;
  std::vector<std::vector<double>> a(nr, std::vector<double>(nv, 0.0));
  std::vector<double> b(nr, 0.0), c(nv, 0.0);

  std::vector<double> a2s(p2, 0.0);
  for (int i = 0; i < p2; ++i)
    for (int k = 0; k < d; ++k) a2s[i] += frames.a2[i][k] * s[k];

  int r = 0;
  for (int i = 0; i < p1; ++i, ++r) {  //  A1 x - t1 <= 0
    for (int k = 0; k < d; ++k) {
      a[r][k] = frames.a1[i][k];
      a[r][d + k] = -frames.a1[i][k];
    }
    a[r][2 * d + i] = -1;
  }
  for (int i = 0; i < p1; ++i, ++r) {  // -A1 x - t1 <= 0
    for (int k = 0; k < d; ++k) {
      a[r][k] = -frames.a1[i][k];
      a[r][d + k] = frames.a1[i][k];
    }
    a[r][2 * d + i] = -1;
  }
  for (int i = 0; i < p2; ++i, ++r) {  //  A2 x - t2 <= A2 s
    for (int k = 0; k < d; ++k) {
      a[r][k] = frames.a2[i][k];
      a[r][d + k] = -frames.a2[i][k];
    }
    a[r][2 * d + p1 + i] = -1;
    b[r] = a2s[i];
  }
  for (int i = 0; i < p2; ++i, ++r) {  // -A2 x - t2 <= -A2 s
    for (int k = 0; k < d; ++k) {
      a[r][k] = -frames.a2[i][k];
      a[r][d + k] = frames.a2[i][k];
    }
    a[r][2 * d + p1 + i] = -1;
    b[r] = -a2s[i];
  }
  for (int i = 0; i < p1 + p2; ++i) c[2 * d + i] = -1.0;

  std::vector<double> z;
  const double val = simplex_solve(a, b, c, z);
  if (!std::isfinite(val))
    throw NumericError("lp_oracle: simplex reported an infeasible or "
                       "unbounded program (should be impossible)");
  LpSolution sol;
  sol.objective = -val;
  sol.s1.resize(d);
  sol.s2.resize(d);
  for (int k = 0; k < d; ++k) {
    sol.s1[k] = z[k] - z[d + k];
    sol.s2[k] = s[k] - sol.s1[k];
  }
  return sol;
}

std::vector<std::vector<double>> random_parseval_analysis(int d, int p,
                                                          Rng& rng) {
  if (p < d) throw ConfigError("parseval frame needs p >= d");
  // orthonormalize p random vectors in R^p, keep d of them as frame rows
  std::vector<std::vector<double>> q(d, std::vector<double>(p));
  for (int i = 0; i < d; ++i) {
    for (;;) {
      for (int k = 0; k < p; ++k) q[i][k] = rng.gaussian();
      for (int j = 0; j < i; ++j) {
        double dot = 0;
        for (int k = 0; k < p; ++k) dot += q[i][k] * q[j][k];
        for (int k = 0; k < p; ++k) q[i][k] -= dot * q[j][k];
      }
      double nrm = 0;
      for (int k = 0; k < p; ++k) nrm += q[i][k] * q[i][k];
      nrm = std::sqrt(nrm);
      if (nrm > 1e-8) {
        for (int k = 0; k < p; ++k) q[i][k] /= nrm;
        break;
      }
    }
  }
  // analysis matrix Phi^T is p x d with (Phi^T)_{k,i} = q[i][k]
  std::vector<std::vector<double>> at(p, std::vector<double>(d));
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < d; ++i) at[k][i] = q[i][k];
  return at;
}

}  // namespace ctsep
