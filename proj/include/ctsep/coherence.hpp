#pragma once

#include "ctsep/curvelet.hpp"
#include "ctsep/gabor.hpp"
#include "ctsep/models.hpp"

namespace ctsep {

// Cluster radii growth rules r_{1,j}, r_{2,j}; margin > 0 gives the strict
// omega-growth the corollary asks for.
struct RadiiSchedule {
  double delta = 2.0;
  double margin = 0.05;
  double c1 = 1.0, c2 = 1.0;

  double r1(int j) const {
    return c1 * std::pow(2.0, j * (1.0 / (2.0 * delta * (1.0 + delta)) +
                                   margin));
  }
  double r2(int j) const {
    return c2 * std::pow(2.0, j * (1.0 / (2.0 * (1.0 + delta)) + margin));
  }
};

// S_{2,j} = (B(0,r1) x B(0,r2)) cap lattice; positions are signed m
// (reduced modulo 2s on the torus).
struct GaborCluster {
  int s = 1;
  double r1 = 0, r2 = 0;
  bool clipped = false;
  std::vector<std::pair<int, int>> ms;
  std::vector<std::pair<int, int>> ns;
  std::size_t size() const { return ms.size() * ns.size(); }
};

GaborCluster build_gabor_cluster(int j, const RadiiSchedule& sched,
                                 const GaborFrame& frame);

// S_{1,j}: curvelet indices in a phase-space tube around the discontinuity
// curve: position within a_{j'}^{1-eps} of the curve and orientation within
// sqrt(a_{j'}) (mod pi) of the nearest wedge direction to the local normal,
// over the scales j' = j-1, j, j+1 present in the frame (the subbands the
// scale-j filter touches).
struct CurveletCluster {
  int j = 0;
  double epsilon = 1.0 / 16.0;
  struct WedgeMembers {
    int scale = 0, wedge = 0;
    std::vector<std::uint32_t> ks;  // flat k1*m2+k2, sorted
  };
  std::vector<WedgeMembers> members;
  std::size_t size() const {
    std::size_t t = 0;
    for (const auto& w : members) t += w.ks.size();
    return t;
  }
};

CurveletCluster build_curvelet_cluster(const CurveletFrame& frame, int j,
                                       double epsilon,
                                       const std::vector<BoundarySample>& b);

// l1 mass of the coefficients outside the cluster
double relative_sparsity(const CurveletCoefs& c, const CurveletCluster& s);
double relative_sparsity(const GaborCoefs& c, const GaborCluster& s);

// 2 (delta1 + delta2) / (1 - 2 mu_c); diverged (returns infinity and sets
// the flag) when mu_c >= 1/2.
double error_bound(double delta1, double delta2, double mu_c,
                   bool* diverged = nullptr);

// exact <gamma_eta, (tight) gabor atom> inner product
cpx pair_inner(const CurveletFrame& cf, const CurveletIndex& eta,
               const GaborFrame& gf, const GaborIndex& lam);

// mu_c(S1, curvelets; gabor): max over gabor candidates (all m, given ns)
// of the in-cluster absolute inner-product sum. The maximum is located with
// a sampled envelope of the cross inner products and the leading candidates
// are re-evaluated exactly.
double cluster_coherence(const CurveletFrame& cf, const CurveletCluster& s1,
                         const GaborFrame& gf,
                         const std::vector<std::pair<int, int>>& candidate_ns,
                         GaborIndex* argmax = nullptr);

// mu_c(S2, gabor; curvelets): max over curvelet candidates in scales
// [band_lo, band_hi]
double cluster_coherence(const GaborFrame& gf, const GaborCluster& s2,
                         const CurveletFrame& cf, int band_lo, int band_hi,
                         CurveletIndex* argmax = nullptr);

// max_{eta, lambda} |<gamma_eta, g_lambda>| over the given windows
double mutual_coherence(const CurveletFrame& cf, int band_lo, int band_hi,
                        const GaborFrame& gf,
                        const std::vector<std::pair<int, int>>& ns);

// M_{a_j, theta, s} = R_theta s^{-1} (supp wedge + B(0,1)) cap Z^2
std::vector<std::pair<int, int>> m_set(int j, double theta, int s,
                                       const CurveletFrame& frame);

// distance from a point to the polar sector
// { r_lo <= |x| <= r_hi, |angle(x) - theta| <= half_angle }
double sector_distance(double x, double y, double theta, double r_lo,
                       double r_hi, double half_angle);

}  // namespace ctsep
