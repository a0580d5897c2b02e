#pragma once

#include <cstdint>
#include <vector>

#include "pinlab/renorm.hpp"

namespace pinlab {

// Absolute constants of the renormalization estimates, computed with
// enclosed tails so that every rounding lands on the safe side: the
// normalizer a is enclosed in [a_lo, a_hi], gamma0 is rounded down, k0 up.
struct ProofConstants {
  double a = 0.0;      // 1 / sum_{n>=1} n^{-3/2}, midpoint of the enclosure
  double a_lo = 0.0;
  double a_hi = 0.0;
  double gamma0 = 0.0;  // largest certified weight for the series bound
  double k0 = 0.0;      // -log(a_lo * gamma0)
  double big_b = 0.0;   // 8 / a_lo
  std::int64_t tail_terms = 0;
};

// Partial sums plus integral/ratio tail enclosures; tail_terms >= 1e4 keeps
// the enclosure width of a below 1e-6.
ProofConstants compute_proof_constants(std::int64_t tail_terms = 100000);

// Certified upper evaluation of g(gamma) = sum_k k^{5/2} gamma^k and the
// predicate g(gamma) <= gamma + 8 gamma^2 it must satisfy.
double series_g_upper(double gamma, int k_max = 400);
bool series_predicate_holds(double gamma, int k_max = 400);

struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool holds = false;
  double ratio = 0.0;  // value / bound
};

// Total weight of chains 0 = j_0 < ... < j_k = N with factor
// C e^{-K} / gap^{3/2} per step, swept over every N <= n, against the
// closed-form tail bound. Requires K >= k0 + log C.
struct ChainBoundSweep {
  std::vector<double> theta;  // theta[N], N in [0, n]
  double worst_ratio = 0.0;
  std::int64_t worst_n = 0;
  bool holds = false;
};
ChainBoundSweep chain_bound_check(std::int64_t n, double c, double k,
                                  const ProofConstants& pc);

// Convolution powers of the normalized law q(n) = a n^{-3/2}: ratio of
// q^{*k}(n) against a k^{5/2} / n^{3/2}, maximized over k <= k_max and
// n <= n_max. Values for n <= n_max are exact despite the truncation.
struct ConvPowerResult {
  double worst_ratio = 0.0;
  std::int64_t worst_k = 0;
  std::int64_t worst_n = 0;
  double tail_mass = 0.0;  // law mass beyond n_max, recorded
  bool holds = false;      // worst_ratio <= 1 up to floating slack
};
ConvPowerResult conv_power_check(std::int64_t k_max, std::int64_t n_max,
                                 const ProofConstants& pc);

// Weight of all subsets of well-separated points that keep both endpoints,
// with reward e^b per interior point kept: the removal estimate. Points
// must be strictly increasing with gaps > e^{(2/3)(b+K)}; K >= k0 + log C.
BoundCheck removal_bound_check(double b, double c, double k,
                               const std::vector<std::int64_t>& points,
                               const ProofConstants& pc);

// Exact composition sums A(z) = sum over x_1..x_m >= b, sum = z of
// exp(-sum sqrt(x_i)), for every z up to z_max (index = z; zero below m b).
std::vector<double> sqrt_composition_sums(int m, std::int64_t b,
                                          std::int64_t z_max);
// One value against the bound e^{-sqrt(z) - (m-1) sqrt(b) / 4}.
BoundCheck sqrt_composition_check(int m, std::int64_t b, std::int64_t z);

// The clustered-tail sum: gaps aggregated over the levels of
// floor(1.5 log gap), each level weighted by its gap count, combined with
// the composition sums. Log-domain: at realistic levels the factors sit far
// below double range. holds compares against
// e^{-(2/3)x - sqrt(x) - (n/8) sqrt(b)}.
struct ClusterTailCheck {
  double log_value = 0.0;
  double log_bound = 0.0;
  bool holds = false;
  double hypothesis_term = 0.0;  // drives the sufficient condition
  bool hypothesis_negative = false;
};
ClusterTailCheck cluster_tail_check(std::int64_t n, std::int64_t b,
                                    std::int64_t x, const RenormParams& p);

// Brute-force gap loop for small thresholds; the oracle for the aggregated
// evaluation. Cost l_b^n, guarded.
double cluster_tail_brute(std::int64_t n, std::int64_t b, std::int64_t x,
                          const RenormParams& p);

}  // namespace pinlab
