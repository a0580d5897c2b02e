#include "pinlab/renorm.hpp"

#include <cmath>

#include "pinlab/errors.hpp"
#include "pinlab/partition.hpp"

namespace pinlab {

namespace {

constexpr long double kInt64Cap = 4.6e18L;  // ~2^62

std::int64_t floor_threshold(long double gap_log_scaled) {
  return static_cast<std::int64_t>(std::floor(gap_log_scaled));
}

// floor(1.5 log gap) in extended precision; gap >= 1.
std::int64_t gap_log_floor(std::int64_t gap) {
  return floor_threshold(1.5L * std::log(static_cast<long double>(gap)));
}

}  // namespace

bool RenormParams::l_fits_int64() const { return l_real < kInt64Cap; }

std::int64_t RenormParams::l_int() const {
  require(l_fits_int64(), ErrorKind::Precondition,
          "clustering threshold exceeds the integer range; "
          "environment-level operations need a smaller level");
  return static_cast<std::int64_t>(l_real);
}

bool RenormParams::flag_subset_count() const {
  return static_cast<double>(k_b) >= 2.0 * std::log(2.0);
}

bool RenormParams::flag_constant() const {
  return static_cast<double>(k_b) >= std::log(2.0 * cal_c);
}

bool RenormParams::flag_removal() const {
  return static_cast<double>(k_b) >= k0 + std::log(c);
}

RenormParams renorm_constants(std::int64_t b, double cal_c, double k0,
                              double big_b, double c) {
  require(b >= 1, ErrorKind::InvalidArgument, "level must be >= 1");
  require(cal_c > 0.0 && k0 > 0.0, ErrorKind::InvalidArgument,
          "constants must be positive");
  require(c > 0.0, ErrorKind::InvalidArgument, "constant must be positive");
  RenormParams p;
  p.b = b;
  p.cal_c = cal_c;
  p.k0 = k0;
  p.big_b = big_b;
  p.c = c;
  double log_plus = std::max(std::log(2.0 * cal_c), 0.0);
  p.k_b = static_cast<std::int64_t>(
      std::floor(k0 + log_plus + 2.0 * std::log(static_cast<double>(b))));
  long double expo =
      (2.0L / 3.0L) * static_cast<long double>(b + p.k_b);
  require(expo < 11000.0L, ErrorKind::Overflow,
          "clustering threshold beyond extended-precision range");
  p.l_real = std::floor(std::exp(expo));
  p.derived = true;
  return p;
}

RenormParams override_params(std::int64_t b, std::int64_t k_b,
                             std::int64_t l_b, double cal_c, double k0,
                             double big_b, double c) {
  require(b >= 1 && k_b >= 0 && l_b >= 1, ErrorKind::InvalidArgument,
          "bad override parameters");
  RenormParams p;
  p.b = b;
  p.k_b = k_b;
  p.l_real = static_cast<long double>(l_b);
  p.cal_c = cal_c;
  p.k0 = k0;
  p.big_b = big_b;
  p.c = c;
  p.derived = false;
  return p;
}

std::int64_t smallest_admissible_level(double cal_c, double k0, double big_b,
                                       double c, std::int64_t b_limit) {
  for (std::int64_t b = 1; b <= b_limit; ++b) {
    if (renorm_constants(b, cal_c, k0, big_b, c).admissible()) return b;
  }
  fail(ErrorKind::Precondition, "no admissible level within the limit");
}

BlockDecomposition decompose(const Environment& env, const RenormParams& p) {
  env.validate();
  const std::int64_t l_b = p.l_int();
  const std::int64_t n = env.size();
  BlockDecomposition d;
  std::int64_t sigma = 0;
  for (std::int64_t k = 0; k <= n; ++k) {
    bool block_ends = (k == n) || (env.gap(k + 1) > l_b);
    if (!block_ends) continue;
    Block blk;
    blk.sigma = sigma;
    blk.tau = k;
    if (sigma == 0) {
      blk.kind = BlockKind::Origin;
    } else if (blk.size() > 1) {
      blk.kind = BlockKind::Bad;
    } else {
      blk.kind = env.eta(sigma) == p.b ? BlockKind::Good
                                       : BlockKind::IsolatedHeavy;
    }
    if (blk.kind == BlockKind::Bad || blk.kind == BlockKind::IsolatedHeavy)
      d.surviving.push_back(static_cast<std::int64_t>(d.blocks.size()));
    d.blocks.push_back(blk);
    sigma = k + 1;
  }
  d.eta_hat_0 = cluster_value(env, d.blocks[0], p.k_b);
  return d;
}

std::int64_t cluster_value(const Environment& env, const Block& blk,
                           std::int64_t k_b) {
  if (blk.size() == 1) return blk.sigma == 0 ? 0 : env.eta(blk.sigma);
  std::int64_t value = 0;
  for (std::int64_t i = blk.sigma; i <= blk.tau; ++i)
    if (i >= 1) value += env.eta(i);
  for (std::int64_t i = blk.sigma + 1; i <= blk.tau; ++i)
    value -= gap_log_floor(env.gap(i));
  value += 2 * (blk.size() - 1) * k_b;
  return value;
}

RenormalizedEnvironment renormalize_environment(const Environment& env,
                                                const RenormParams& p) {
  BlockDecomposition d = decompose(env, p);
  require(!d.surviving.empty(), ErrorKind::Precondition,
          "renormalized environment is empty: no block survives the level");
  const std::int64_t l_b = p.l_int();
  RenormalizedEnvironment out;
  out.env.level = p.b + 1;
  std::int64_t prev_block = 0;
  for (std::int64_t s : d.surviving) {
    std::int64_t gap = 0;
    for (std::int64_t j = prev_block + 1; j <= s; ++j)
      gap += env.gap(d.blocks[static_cast<std::size_t>(j)].sigma) - l_b;
    out.env.gaps.push_back(gap);
    out.env.etas.push_back(
        cluster_value(env, d.blocks[static_cast<std::size_t>(s)], p.k_b));
    prev_block = s;
  }
  out.env.rebuild_locations();
  out.env.validate();
  out.eta_hat_0 = d.eta_hat_0;
  out.decomposition = std::move(d);
  return out;
}

double renormalize_constant(double c, std::int64_t k_b, double big_b) {
  require(c > 0.0, ErrorKind::InvalidArgument, "constant must be positive");
  return (1.0 + big_b * std::exp(-static_cast<double>(k_b)) * c) * c;
}

RenormBoundCheck verify_renorm_bound(const Environment& env,
                                     const RenormParams& p,
                                     std::int64_t n_surviving) {
  require(p.admissible(), ErrorKind::Precondition,
          "inadmissible renormalization parameters");
  require(p.c > 0.0 && p.c <= 2.0 * p.cal_c, ErrorKind::Precondition,
          "constant outside (0, 2 cal_c]");
  RenormalizedEnvironment ren = renormalize_environment(env, p);
  const auto& d = ren.decomposition;
  require(n_surviving >= 1 &&
              n_surviving <= static_cast<std::int64_t>(d.surviving.size()),
          ErrorKind::Precondition, "not enough surviving blocks");
  RenormBoundCheck chk;
  std::int64_t s_n =
      d.surviving[static_cast<std::size_t>(n_surviving - 1)];
  chk.n_of_omega = d.blocks[static_cast<std::size_t>(s_n)].tau;
  chk.index_ok = n_surviving <= chk.n_of_omega;
  chk.span_ok =
      ren.env.location(n_surviving) <= env.location(chk.n_of_omega);
  chk.lhs = charge_partition(env, chk.n_of_omega, p.c);
  double lifted = renormalize_constant(p.c, p.k_b, p.big_b);
  chk.rhs = LogWeight::from_log(static_cast<double>(ren.eta_hat_0)) *
            charge_partition(ren.env, n_surviving, lifted);
  chk.log_margin = chk.rhs.log() - chk.lhs.log();
  chk.holds = chk.log_margin >= -1e-9;
  return chk;
}

std::vector<GapLogLevel> gap_log_levels(long double l_max) {
  require(l_max >= 1.0L, ErrorKind::InvalidArgument,
          "threshold must be >= 1");
  std::vector<GapLogLevel> out;
  std::int64_t m_top = floor_threshold(1.5L * std::log(l_max));
  long double lo = 1.0L;
  for (std::int64_t m = 0; m <= m_top; ++m) {
    // Smallest gap with floor(1.5 log gap) = m + 1.
    long double next = std::ceil(std::exp((2.0L / 3.0L) *
                                          static_cast<long double>(m + 1)));
    if (next < kInt64Cap) {
      // Exact integer adjustment near the boundary.
      std::int64_t g = static_cast<std::int64_t>(next);
      while (g > 1 && gap_log_floor(g - 1) >= m + 1) --g;
      while (gap_log_floor(g) < m + 1) ++g;
      next = static_cast<long double>(g);
    }
    long double hi = std::min(next - 1.0L, l_max);
    if (hi >= lo) out.push_back({m, lo, hi});
    lo = next;
    if (lo > l_max) break;
  }
  return out;
}

}  // namespace pinlab
