#include "pinlab/bounds.hpp"

#include <cmath>
#include <limits>

#include "pinlab/errors.hpp"
#include "pinlab/log_weight.hpp"

namespace pinlab {

ProofConstants compute_proof_constants(std::int64_t tail_terms) {
  require(tail_terms >= 10000, ErrorKind::InvalidArgument,
          "need >= 1e4 terms for a tight enclosure");
  ProofConstants pc;
  pc.tail_terms = tail_terms;
  CompensatedSum s;
  for (std::int64_t n = 1; n <= tail_terms; ++n)
    s.add(std::pow(static_cast<double>(n), -1.5));
  // integral enclosure of the tail: 2/sqrt(N+1) <= sum_{n>N} n^{-3/2} <= 2/sqrt(N)
  double tail_hi = 2.0 / std::sqrt(static_cast<double>(tail_terms));
  double tail_lo = 2.0 / std::sqrt(static_cast<double>(tail_terms + 1));
  pc.a_lo = 1.0 / (s.value() + tail_hi);
  pc.a_hi = 1.0 / (s.value() + tail_lo);
  pc.a = 0.5 * (pc.a_lo + pc.a_hi);

  // Largest certified gamma0: the predicate is monotone, since
  // (g(gamma) - gamma - 8 gamma^2) / gamma^2 is strictly increasing.
  double lo = 0.0, hi = 0.5;
  require(series_predicate_holds(1e-6) && !series_predicate_holds(hi),
          ErrorKind::Precondition, "series predicate bracket failed");
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    (series_predicate_holds(mid) ? lo : hi) = mid;
  }
  pc.gamma0 = lo;
  pc.k0 = -std::log(pc.a_lo * pc.gamma0);
  pc.big_b = 8.0 / pc.a_lo;
  return pc;
}

double series_g_upper(double gamma, int k_max) {
  if (gamma <= 0.0) return 0.0;
  CompensatedSum s;
  double term = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    term = std::pow(static_cast<double>(k), 2.5) *
           std::pow(gamma, static_cast<double>(k));
    s.add(term);
  }
  // geometric tail bound once the term ratio has dropped below r < 1
  double r = std::pow((static_cast<double>(k_max) + 1.0) /
                          static_cast<double>(k_max),
                      2.5) *
             gamma;
  if (r >= 0.999) return std::numeric_limits<double>::infinity();
  return s.value() + term * r / (1.0 - r);
}

bool series_predicate_holds(double gamma, int k_max) {
  double g = series_g_upper(gamma, k_max);
  return g <= gamma + 8.0 * gamma * gamma;
}

ChainBoundSweep chain_bound_check(std::int64_t n, double c, double k,
                                  const ProofConstants& pc) {
  require(n >= 1 && c > 0.0, ErrorKind::InvalidArgument, "bad parameters");
  require(k >= pc.k0 + std::log(c), ErrorKind::Precondition,
          "inadmissible parameters: K below k0 + log C");
  const double step = c * std::exp(-k);
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t g = 1; g <= n; ++g)
    w[static_cast<std::size_t>(g)] =
        step * std::pow(static_cast<double>(g), -1.5);
  ChainBoundSweep out;
  out.theta.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out.theta[0] = 1.0;
  for (std::int64_t m = 1; m <= n; ++m) {
    CompensatedSum s;
    for (std::int64_t j = 0; j < m; ++j)
      s.add(out.theta[static_cast<std::size_t>(j)] *
            w[static_cast<std::size_t>(m - j)]);
    out.theta[static_cast<std::size_t>(m)] = s.value();
  }
  const double lift = 1.0 + pc.big_b * step;
  out.worst_ratio = 0.0;
  for (std::int64_t m = 1; m <= n; ++m) {
    double bound = lift * step * std::pow(static_cast<double>(m), -1.5);
    double ratio = out.theta[static_cast<std::size_t>(m)] / bound;
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_n = m;
    }
  }
  out.holds = out.worst_ratio <= 1.0 + 1e-12;
  return out;
}

ConvPowerResult conv_power_check(std::int64_t k_max, std::int64_t n_max,
                                 const ProofConstants& pc) {
  require(k_max >= 1 && n_max >= 1, ErrorKind::InvalidArgument,
          "bad sweep range");
  ConvPowerResult out;
  std::vector<double> q(static_cast<std::size_t>(n_max) + 1, 0.0);
  CompensatedSum kept;
  for (std::int64_t g = 1; g <= n_max; ++g) {
    q[static_cast<std::size_t>(g)] =
        pc.a * std::pow(static_cast<double>(g), -1.5);
    kept.add(q[static_cast<std::size_t>(g)]);
  }
  out.tail_mass = 1.0 - kept.value();

  // Truncation at n_max is exact for every value we inspect: a k-fold
  // composition reaching n <= n_max only uses steps below n_max.
  std::vector<double> cur = q;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    if (k > 1) {
      std::vector<double> next(static_cast<std::size_t>(n_max) + 1, 0.0);
      for (std::int64_t m = 2; m <= n_max; ++m) {
        CompensatedSum s;
        for (std::int64_t j = 1; j < m; ++j)
          s.add(cur[static_cast<std::size_t>(j)] *
                q[static_cast<std::size_t>(m - j)]);
        next[static_cast<std::size_t>(m)] = s.value();
      }
      cur.swap(next);
    }
    double kk = pc.a * std::pow(static_cast<double>(k), 2.5);
    for (std::int64_t m = 1; m <= n_max; ++m) {
      double bound = kk * std::pow(static_cast<double>(m), -1.5);
      double ratio = cur[static_cast<std::size_t>(m)] / bound;
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_k = k;
        out.worst_n = m;
      }
    }
  }
  out.holds = out.worst_ratio <= 1.0 + 1e-12;
  return out;
}

BoundCheck removal_bound_check(double b, double c, double k,
                               const std::vector<std::int64_t>& points,
                               const ProofConstants& pc) {
  const std::int64_t n = static_cast<std::int64_t>(points.size()) - 1;
  require(n >= 1, ErrorKind::InvalidArgument, "need at least two points");
  require(b > 0.0 && c > 0.0, ErrorKind::InvalidArgument, "bad parameters");
  require(k >= pc.k0 + std::log(c), ErrorKind::Precondition,
          "inadmissible parameters: K below k0 + log C");
  const double min_gap = std::exp((2.0 / 3.0) * (b + k));
  for (std::int64_t i = 1; i <= n; ++i) {
    require(points[static_cast<std::size_t>(i)] >
                points[static_cast<std::size_t>(i - 1)],
            ErrorKind::InvalidArgument, "points must increase");
    require(static_cast<double>(points[static_cast<std::size_t>(i)] -
                                points[static_cast<std::size_t>(i - 1)]) >
                min_gap,
            ErrorKind::Precondition,
            "inadmissible point set: a gap is below e^{(2/3)(b+K)}");
  }
  // Subset sum via the chain expansion: value = e^{-b} X(n) with
  // X(m) = sum_{j<m} X(j) C e^b / (t_m - t_j)^{3/2}. The per-step factor
  // is below C e^{-K} < 1, so linear doubles are safe.
  std::vector<double> xs(static_cast<std::size_t>(n) + 1, 0.0);
  xs[0] = 1.0;
  const double step = c * std::exp(b);
  for (std::int64_t m = 1; m <= n; ++m) {
    CompensatedSum s;
    for (std::int64_t j = 0; j < m; ++j) {
      double gap = static_cast<double>(points[static_cast<std::size_t>(m)] -
                                       points[static_cast<std::size_t>(j)]);
      s.add(xs[static_cast<std::size_t>(j)] * step * std::pow(gap, -1.5));
    }
    xs[static_cast<std::size_t>(m)] = s.value();
  }
  BoundCheck out;
  out.value = std::exp(-b) * xs[static_cast<std::size_t>(n)];
  double span = static_cast<double>(points.back() - points.front());
  out.bound = (1.0 + pc.big_b * c * std::exp(-k)) * c * std::pow(span, -1.5);
  out.ratio = out.value / out.bound;
  out.holds = out.ratio <= 1.0 + 1e-12;
  return out;
}

std::vector<double> sqrt_composition_sums(int m, std::int64_t b,
                                          std::int64_t z_max) {
  require(m >= 1 && b >= 1, ErrorKind::InvalidArgument, "bad parameters");
  std::vector<double> base(static_cast<std::size_t>(z_max) + 1, 0.0);
  for (std::int64_t x = b; x <= z_max; ++x)
    base[static_cast<std::size_t>(x)] =
        std::exp(-std::sqrt(static_cast<double>(x)));
  std::vector<double> cur = base;
  for (int stage = 2; stage <= m; ++stage) {
    std::vector<double> next(static_cast<std::size_t>(z_max) + 1, 0.0);
    for (std::int64_t z = static_cast<std::int64_t>(stage) * b; z <= z_max;
         ++z) {
      CompensatedSum s;
      for (std::int64_t x = b; z - x >= (stage - 1) * b; ++x)
        s.add(base[static_cast<std::size_t>(x)] *
              cur[static_cast<std::size_t>(z - x)]);
      next[static_cast<std::size_t>(z)] = s.value();
    }
    cur.swap(next);
  }
  return cur;
}

BoundCheck sqrt_composition_check(int m, std::int64_t b, std::int64_t z) {
  require(m >= 2, ErrorKind::InvalidArgument, "need at least two parts");
  BoundCheck out;
  out.bound = std::exp(-std::sqrt(static_cast<double>(z)) -
                       0.25 * static_cast<double>(m - 1) *
                           std::sqrt(static_cast<double>(b)));
  if (z < static_cast<std::int64_t>(m) * b) {
    out.value = 0.0;  // empty sum
    out.ratio = 0.0;
    out.holds = true;
    return out;
  }
  out.value = sqrt_composition_sums(m, b, z)[static_cast<std::size_t>(z)];
  out.ratio = out.value / out.bound;
  out.holds = out.ratio <= 1.0 + 1e-12;
  return out;
}

ClusterTailCheck cluster_tail_check(std::int64_t n, std::int64_t b,
                                    std::int64_t x, const RenormParams& p) {
  require(n >= 1 && b >= 1 && x >= 1, ErrorKind::InvalidArgument,
          "bad parameters");
  ClusterTailCheck out;
  const double kb = static_cast<double>(p.k_b);
  out.hypothesis_term = -0.125 * std::sqrt(static_cast<double>(b)) +
                        (4.0 / 3.0) * kb +
                        std::sqrt(2.0 * kb / static_cast<double>(n)) + 1.0 +
                        std::log((2.0 / 3.0) * (static_cast<double>(b) + kb));
  out.hypothesis_negative = out.hypothesis_term < 0.0;

  auto levels = gap_log_levels(p.l_real);
  const std::int64_t m_top = levels.back().m;
  // log of the gap-count measure per level
  std::vector<double> logw(static_cast<std::size_t>(m_top) + 1,
                           -std::numeric_limits<double>::infinity());
  for (const auto& lv : levels)
    logw[static_cast<std::size_t>(lv.m)] =
        static_cast<double>(std::log(lv.count()));

  // n-fold log-domain convolution over the total level sum sigma.
  std::vector<double> cur = logw;
  for (std::int64_t stage = 2; stage <= n; ++stage) {
    std::vector<double> next(cur.size() + logw.size() - 1,
                             -std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < next.size(); ++s) {
      LogAccumulator acc;
      for (std::size_t m = 0; m < logw.size() && m <= s; ++m) {
        if (s - m >= cur.size()) continue;
        acc.add_log(logw[m] + cur[s - m]);
      }
      next[s] = acc.log_total();
    }
    cur.swap(next);
  }

  const std::int64_t sigma_top = static_cast<std::int64_t>(cur.size()) - 1;
  const std::int64_t z_top = x + sigma_top - 2 * n * p.k_b;
  std::vector<double> comp =
      sqrt_composition_sums(static_cast<int>(n) + 1, b, std::max<std::int64_t>(z_top, 1));

  LogAccumulator total;
  for (std::int64_t sigma = 0; sigma <= sigma_top; ++sigma) {
    double lw = cur[static_cast<std::size_t>(sigma)];
    if (std::isinf(lw)) continue;
    std::int64_t z = x + sigma - 2 * n * p.k_b;
    if (z < (n + 1) * b || z > z_top) continue;  // composition sum vanishes
    double a_val = comp[static_cast<std::size_t>(z)];
    if (a_val <= 0.0) continue;
    total.add_log(lw - (2.0 / 3.0) * static_cast<double>(z) +
                  std::log(a_val));
  }
  out.log_value = total.log_total();
  out.log_bound = -(2.0 / 3.0) * static_cast<double>(x) -
                  std::sqrt(static_cast<double>(x)) -
                  (static_cast<double>(n) / 8.0) *
                      std::sqrt(static_cast<double>(b));
  out.holds = out.log_value <= out.log_bound + 1e-9;
  return out;
}

double cluster_tail_brute(std::int64_t n, std::int64_t b, std::int64_t x,
                          const RenormParams& p) {
  const std::int64_t l = p.l_int();
  double combos = std::pow(static_cast<double>(l), static_cast<double>(n));
  require(combos <= 2e7, ErrorKind::InvalidArgument,
          "brute-force gap loop too large");
  std::int64_t z_top = x;  // shifts are <= floor(1.5 log l) per gap
  z_top += n * static_cast<std::int64_t>(
                   std::floor(1.5 * std::log(static_cast<double>(l))));
  std::vector<double> comp =
      sqrt_composition_sums(static_cast<int>(n) + 1, b,
                            std::max<std::int64_t>(z_top, 1));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 1);
  CompensatedSum total;
  while (true) {
    std::int64_t shift = 0;
    for (std::int64_t v : idx)
      shift += static_cast<std::int64_t>(
          std::floor(1.5L * std::log(static_cast<long double>(v))));
    std::int64_t z = x + shift - 2 * n * p.k_b;
    if (z >= (n + 1) * b && z <= z_top && comp[static_cast<std::size_t>(z)] > 0.0)
      total.add(std::exp(-(2.0 / 3.0) * static_cast<double>(z)) *
                comp[static_cast<std::size_t>(z)]);
    std::size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] <= l) break;
      idx[pos] = 1;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return total.value();
}

}  // namespace pinlab
