#include "pinlab/partition.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "pinlab/errors.hpp"

namespace pinlab {

LogWeight exact_partition(const std::vector<std::int64_t>& sites,
                          const InterArrivalLaw& k) {
  const std::int64_t n = static_cast<std::int64_t>(sites.size());
  require(n >= 1, ErrorKind::InvalidArgument, "need at least one site");
  require(k.n_max >= n, ErrorKind::InvalidArgument,
          "inter-arrival law shorter than the site sequence");
  std::vector<double> logk(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t m = 1; m <= n; ++m)
    logk[static_cast<std::size_t>(m)] = k.log_mass(m);
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  z[0] = 0.0;  // log 1
  for (std::int64_t m = 1; m <= n; ++m) {
    LogAccumulator acc;
    for (std::int64_t j = 0; j < m; ++j) {
      double lk = logk[static_cast<std::size_t>(m - j)];
      if (std::isinf(lk)) continue;
      acc.add_log(z[static_cast<std::size_t>(j)] + lk);
    }
    z[static_cast<std::size_t>(m)] =
        acc.log_total() + static_cast<double>(sites[static_cast<std::size_t>(m - 1)]);
  }
  return LogWeight::from_log(z[static_cast<std::size_t>(n)]);
}

LogWeight charge_partition(const Environment& env, std::int64_t n, double c) {
  require(n >= 1 && n <= env.size(), ErrorKind::InvalidArgument,
          "charge count out of range");
  require(c > 0.0, ErrorKind::InvalidArgument, "constant must be positive");
  const double logc = std::log(c);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  w[0] = 0.0;
  const std::int64_t* t = env.t.data();
  for (std::int64_t j = 1; j <= n; ++j) {
    LogAccumulator acc;
    const std::int64_t tj = t[j];
    for (std::int64_t i = 0; i < j; ++i)
      acc.add_log(w[static_cast<std::size_t>(i)] + logc -
                  1.5 * std::log(static_cast<double>(tj - t[i])));
    w[static_cast<std::size_t>(j)] =
        acc.log_total() + static_cast<double>(env.eta(j));
  }
  return LogWeight::from_log(w[static_cast<std::size_t>(n)]);
}

PartitionBoundCheck partition_upper_bound_check(const Environment& env,
                                                const InterArrivalLaw& k,
                                                const RenewalFunction& u) {
  require(env.span() <= u.n_max && env.span() <= k.n_max,
          ErrorKind::Precondition,
          "environment spans beyond the computed renewal range");
  PartitionBoundCheck out;
  out.exact = exact_partition(to_sites(env, env.span()), k);
  out.charge_bound = charge_partition(env, env.size(), u.cal_c);
  out.log_margin = out.charge_bound.log() - out.exact.log();
  out.holds = out.log_margin >= -1e-9;
  return out;
}

LogWeight strategy_lower_bound(const Environment& env, std::int64_t beta,
                               const InterArrivalLaw& k_plus) {
  env.validate();
  for (std::int64_t k = 1; k <= env.size(); ++k)
    require(env.eta(k) == beta, ErrorKind::InvalidArgument,
            "strategy bound needs all intensities equal to beta");
  double log_value = 0.0;
  for (std::int64_t k = 1; k <= env.size(); ++k) {
    double lk = k_plus.log_mass(env.gap(k));
    require(!std::isinf(lk), ErrorKind::Precondition,
            "infeasible strategy: a gap carries no first-return mass");
    log_value += static_cast<double>(beta) + lk;
  }
  return LogWeight::from_log(log_value);
}

double single_jump_floor(double top_intensity, double c, double t_n) {
  return (1.5 * std::log(t_n) - top_intensity - std::log(c)) / t_n;
}

namespace {

double replica_value(const ChargeLaw& law, double c, std::int64_t n_charges,
                     std::uint64_t seed, int replica, double* span_out) {
  SplitMix64 rng =
      SplitMix64::stream(seed, static_cast<std::uint64_t>(replica));
  Environment env = sample_environment(law, n_charges, rng);
  *span_out = static_cast<double>(env.span());
  LogWeight w = charge_partition(env, n_charges, c);
  return w.log() / static_cast<double>(env.span());
}

}  // namespace

FreeEnergyEstimate estimate_free_energy(const ChargeLaw& law, double c,
                                        std::int64_t n_charges, int replicas,
                                        std::uint64_t seed, int threads) {
  require(replicas >= 1, ErrorKind::InvalidArgument, "need >= 1 replica");
  require(n_charges >= 1, ErrorKind::InvalidArgument, "need >= 1 charge");
  FreeEnergyEstimate est;
  est.n_charges = n_charges;
  est.replicas = replicas;
  est.seed = seed;
  est.c_const = c;
  est.replica_values.assign(static_cast<std::size_t>(replicas), 0.0);
  std::vector<double> spans(static_cast<std::size_t>(replicas), 0.0);

  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min<int>(threads, replicas);
  if (threads <= 1) {
    for (int r = 0; r < replicas; ++r)
      est.replica_values[static_cast<std::size_t>(r)] = replica_value(
          law, c, n_charges, seed, r, &spans[static_cast<std::size_t>(r)]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w]() {
        for (int r = w; r < replicas; r += threads)
          est.replica_values[static_cast<std::size_t>(r)] = replica_value(
              law, c, n_charges, seed, r, &spans[static_cast<std::size_t>(r)]);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction: the result does not depend on the worker count.
  CompensatedSum mean_s, span_s;
  for (int r = 0; r < replicas; ++r) {
    mean_s.add(est.replica_values[static_cast<std::size_t>(r)]);
    span_s.add(spans[static_cast<std::size_t>(r)]);
  }
  est.value = mean_s.value() / replicas;
  est.t_n_mean = span_s.value() / replicas;
  if (replicas > 1) {
    CompensatedSum var_s;
    for (double v : est.replica_values) {
      double d = v - est.value;
      var_s.add(d * d);
    }
    est.stderr_ = std::sqrt(var_s.value() / (replicas - 1)) /
                  std::sqrt(static_cast<double>(replicas));
  }
  return est;
}

double annealed_free_energy(double beta, double p, const InterArrivalLaw& k) {
  return homogeneous_pinning_free_energy(k, std::log(annealed_reward(beta, p)));
}

std::string free_energy_json(const FreeEnergyEstimate& est) {
  std::ostringstream out;
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "{\"law\":\"" << est.law_label << "\",\"C\":" << num(est.c_const)
      << ",\"n_charges\":" << est.n_charges << ",\"replicas\":" << est.replicas
      << ",\"seed\":" << est.seed << ",\"value\":" << num(est.value)
      << ",\"stderr\":" << num(est.stderr_)
      << ",\"t_n_mean\":" << num(est.t_n_mean) << "}";
  return out.str();
}

}  // namespace pinlab
