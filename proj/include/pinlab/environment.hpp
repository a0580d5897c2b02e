#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pinlab/rng.hpp"

namespace pinlab {

// Discrete one-marginal charge law on {0} u {level, level+1, ..., x_max}.
// lost_mass records probability discarded by support truncation, so
// mass0 + sum(atoms) + lost_mass == 1 always holds.
struct ChargeLaw {
  std::int64_t level = 1;  // minimum positive charge b
  std::int64_t x_max = 1;  // support truncation
  double mass0 = 1.0;      // mu(0)
  double lost_mass = 0.0;
  std::vector<double> atoms;  // atoms[i] = mu(level + i)

  double at(std::int64_t x) const {
    if (x == 0) return mass0;
    if (x < level || x > x_max) return 0.0;
    return atoms[static_cast<std::size_t>(x - level)];
  }
  double c_b() const;       // mu([b, inf)) restricted to the kept support
  double ctilde_b() const;  // mu([b+1, inf)) restricted to the kept support
  double mean_positive() const;  // sum x mu(x) over kept atoms
  void validate() const;
};

// Two-atom level-beta law: mass 1 - e^{-c beta} at 0 and e^{-c beta} at beta.
// Charge intensities are integers throughout, so beta is an integer.
ChargeLaw mu_beta(std::int64_t beta, double c);

// General law from explicit atoms; mass0 is set to 1 - sum(atoms).
ChargeLaw make_charge_law(
    std::int64_t level,
    const std::vector<std::pair<std::int64_t, double>>& atoms);

// Finite charge sequence in run-length form: gaps Delta_k >= 1 and integer
// intensities eta_k >= 1, with charge locations t_k = Delta_1 + ... + Delta_k.
// Immutable after construction; the site sequence is derived on demand.
struct Environment {
  std::int64_t level = 1;  // smallest intensity the sequence may carry
  std::vector<std::int64_t> gaps;
  std::vector<std::int64_t> etas;
  std::vector<std::int64_t> t;  // t[0] = 0, t[k] = location of charge k

  std::int64_t size() const { return static_cast<std::int64_t>(gaps.size()); }
  std::int64_t span() const { return t.back(); }  // t_n
  std::int64_t location(std::int64_t k) const {  // t_k, k in [0, size]
    return t[static_cast<std::size_t>(k)];
  }
  std::int64_t eta(std::int64_t k) const {  // eta_k, k in [1, size]
    return etas[static_cast<std::size_t>(k - 1)];
  }
  std::int64_t gap(std::int64_t k) const {  // Delta_k, k in [1, size]
    return gaps[static_cast<std::size_t>(k - 1)];
  }
  void rebuild_locations();
  void validate() const;
};

Environment make_environment(std::int64_t level,
                             std::vector<std::int64_t> gaps,
                             std::vector<std::int64_t> etas);

// Gaps are i.i.d. geometric with success parameter c_b, intensities i.i.d.
// from mu conditioned on being positive. Deterministic for a given seed.
Environment sample_environment(const ChargeLaw& law, std::int64_t n_charges,
                               std::uint64_t seed);
Environment sample_environment(const ChargeLaw& law, std::int64_t n_charges,
                               SplitMix64& rng);

// Site values omega_1..omega_N: eta_k at t_k, zero elsewhere. N <= t_n.
std::vector<std::int64_t> to_sites(const Environment& env, std::int64_t n);

// Inverse of to_sites on the span ending at the last positive entry.
Environment from_sites(const std::vector<std::int64_t>& sites);

// Text format: "#pinlab-env v1 level=<b>" then one "Delta,eta" row per
// charge. The loader re-validates all invariants.
void save_environment(std::ostream& out, const Environment& env);
void save_environment(const std::string& path, const Environment& env);
Environment load_environment(std::istream& in);
Environment load_environment(const std::string& path);

}  // namespace pinlab
