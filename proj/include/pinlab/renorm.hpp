#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/log_weight.hpp"

namespace pinlab {

// Level-b renormalization constants. k_b = floor(k0 + log+(2 cal_c) + 2 log b)
// and the clustering threshold l_b = floor(e^{(2/3)(b + k_b)}). l_b is kept
// as an extended-precision real: it exceeds the int64 range long before the
// measure recursion stops needing it. Operations that walk an actual charge
// sequence require the integer form and refuse to run otherwise.
struct RenormParams {
  std::int64_t b = 1;
  std::int64_t k_b = 0;
  double c = 0.0;      // current constant C fed to the bound
  double cal_c = 0.0;  // the constant the parameters were derived for
  double k0 = 0.0;     // absolute constant K_0
  double big_b = 0.0;  // absolute constant B
  long double l_real = 0.0L;
  bool derived = true;  // false when (k_b, l_b) were overridden for a test

  bool l_fits_int64() const;
  std::int64_t l_int() const;  // throws Precondition when out of range

  // Hypotheses used by the renormalization estimate, surfaced as predicates
  // rather than assumed from some level onward.
  bool flag_subset_count() const;  // k_b >= 2 log 2
  bool flag_constant() const;      // k_b >= log(2 cal_c)
  bool flag_removal() const;       // k_b >= k0 + log c
  bool admissible() const {
    return flag_subset_count() && flag_constant() && flag_removal();
  }
};

RenormParams renorm_constants(std::int64_t b, double cal_c, double k0,
                              double big_b, double c);

// Explicit (k_b, l_b) for pipeline tests at desk scale.
RenormParams override_params(std::int64_t b, std::int64_t k_b,
                             std::int64_t l_b, double cal_c, double k0,
                             double big_b, double c);

// Smallest level whose derived constants satisfy all admissibility flags.
std::int64_t smallest_admissible_level(double cal_c, double k0, double big_b,
                                       double c, std::int64_t b_limit = 4096);

enum class BlockKind { Origin, Good, IsolatedHeavy, Bad };

// Charge indices [sigma, tau] of one block; index 0 is the virtual origin
// charge at t_0 = 0 with intensity 0.
struct Block {
  std::int64_t sigma = 0;
  std::int64_t tau = 0;
  BlockKind kind = BlockKind::Origin;
  std::int64_t size() const { return tau - sigma + 1; }
};

struct BlockDecomposition {
  std::vector<Block> blocks;           // blocks[0] always contains the origin
  std::vector<std::int64_t> surviving;  // indices of non-Good blocks >= 1
  std::int64_t eta_hat_0 = 0;           // cluster value of block 0
};

// Scans the gap sequence once: a block ends at charge k when the gap to
// charge k+1 exceeds l_b (the gap past the last charge counts as infinite).
BlockDecomposition decompose(const Environment& env, const RenormParams& p);

// Clustered intensity of a block: sum of intensities, minus
// floor(1.5 log gap) per internal gap, plus 2 k_b per internal gap.
// Integer-valued; a singleton keeps its intensity.
std::int64_t cluster_value(const Environment& env, const Block& blk,
                           std::int64_t k_b);

struct RenormalizedEnvironment {
  Environment env;  // level b+1 sequence of surviving clustered charges
  std::int64_t eta_hat_0 = 0;
  BlockDecomposition decomposition;
};

// The level-b map on environments: bad blocks cluster, good charges vanish,
// every inter-block gap shrinks by l_b.
RenormalizedEnvironment renormalize_environment(const Environment& env,
                                                const RenormParams& p);

// The level-b map on the constant: C -> (1 + B e^{-k_b} C) C.
double renormalize_constant(double c, std::int64_t k_b, double big_b);

struct RenormBoundCheck {
  LogWeight lhs;           // charge partition of the original environment
  LogWeight rhs;           // e^{eta_hat_0} times the renormalized partition
  std::int64_t n_of_omega = 0;  // last charge index feeding the lhs
  bool index_ok = false;        // N <= n(omega, N)
  bool span_ok = false;         // t_N(renormalized) <= t_{n}(original)
  bool holds = false;           // lhs <= rhs
  double log_margin = 0.0;
};

// Verifies that renormalizing can only raise the charge partition value,
// with the constant lifted accordingly. Requires admissible parameters and
// c in (0, 2 cal_c]; a violation on an admissible instance is a bug, never
// an expected outcome.
RenormBoundCheck verify_renorm_bound(const Environment& env,
                                     const RenormParams& p,
                                     std::int64_t n_surviving);

// One aggregation level of the clustering map: all gaps in [lo, hi] share
// floor(1.5 log gap) = m. Boundaries are exact integers while they fit in
// int64, extended-precision reals beyond.
struct GapLogLevel {
  std::int64_t m = 0;
  long double lo = 1.0L;
  long double hi = 1.0L;
  long double count() const { return hi - lo + 1.0L; }
};

// The complete set of levels intersecting [1, l_max]. Iterating gaps up to
// l_max is hopeless (l_max is exponentially large); iterating levels costs
// only floor(1.5 log l_max) + 1 entries.
std::vector<GapLogLevel> gap_log_levels(long double l_max);

}  // namespace pinlab
