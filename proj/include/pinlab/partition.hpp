#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/log_weight.hpp"
#include "pinlab/renewal.hpp"

namespace pinlab {

// Exact pinning partition value for a site sequence omega_1..omega_N under
// inter-arrival law K, with the endpoint pinned: dynamic programming
// z(0) = 1, z(m) = sum_{j<m} z(j) K(m-j) e^{omega_m}. O(N^2) time.
LogWeight exact_partition(const std::vector<std::int64_t>& sites,
                          const InterArrivalLaw& k);

// Charge-indexed upper-bound partition value with per-gap weight
// C / gap^{3/2}: W(0) = 1, W(j) = e^{eta_j} sum_{i<j} W(i) C/(t_j-t_i)^{3/2};
// returns W(n). O(n^2) over charges.
LogWeight charge_partition(const Environment& env, std::int64_t n, double c);

// Both sides of the domination of the exact partition value by the
// charge-indexed one evaluated at C = cal_c of the given renewal function.
struct PartitionBoundCheck {
  LogWeight exact;         // endpoint-pinned value at N = t_n
  LogWeight charge_bound;  // charge DP at C = cal_c
  bool holds = false;
  double log_margin = 0.0;  // log(bound) - log(exact)
};
PartitionBoundCheck partition_upper_bound_check(const Environment& env,
                                                const InterArrivalLaw& k,
                                                const RenewalFunction& u);

// Value of the single renewal trajectory that touches every charge:
// log = n beta + sum_l log K(Delta_l). Requires all intensities equal to
// beta and K positive on every gap present. The endpoint tail factor beyond
// the last charge is omitted; it vanishes per site and only weakens a lower
// bound.
LogWeight strategy_lower_bound(const Environment& env, std::int64_t beta,
                               const InterArrivalLaw& k_plus);

struct FreeEnergyEstimate {
  double value = 0.0;    // mean over replicas of (1/t_n) log W(n)
  double stderr_ = 0.0;  // replica spread / sqrt(replicas)
  std::int64_t n_charges = 0;
  int replicas = 0;
  std::uint64_t seed = 0;
  double t_n_mean = 0.0;
  std::vector<double> replica_values;
  std::string law_label;
  double c_const = 0.0;
};

// Monte Carlo estimate of the a.s. growth rate of the charge partition,
// normalized by the span t_n. One independent RNG stream per replica;
// the reduction is in fixed replica order, so the result is identical for
// any worker count. threads = 0 picks the hardware count.
FreeEnergyEstimate estimate_free_energy(const ChargeLaw& law, double c,
                                        std::int64_t n_charges, int replicas,
                                        std::uint64_t seed, int threads = 0);

// Finite-size floor of the estimator: the single-jump trajectory gives
// log W >= beta_top + log C - 1.5 log t_n, so estimates in the delocalized
// phase sit within this magnitude below zero.
double single_jump_floor(double top_intensity, double c, double t_n);

// Annealed value: homogeneous model with reward log M(beta, p).
double annealed_free_energy(double beta, double p, const InterArrivalLaw& k);

std::string free_energy_json(const FreeEnergyEstimate& est);

}  // namespace pinlab
