#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pinlab {

// Default truncation horizon for inter-arrival tables.
inline constexpr std::int64_t kDefaultHorizon = std::int64_t{1} << 16;

// Inter-arrival distribution K(n) of a terminating renewal process:
// K(n) >= 0 on {1..n_max}, total mass delta < 1, tail K(n) ~ c_k / n^{1+alpha}.
struct InterArrivalLaw {
  std::vector<double> mass;  // mass[n] for n in [0, n_max]; mass[0] == 0
  double delta = 0.0;        // sum of mass
  double alpha = 0.5;        // tail exponent
  double c_k = 0.0;          // tail constant along the supported subsequence
  double tail_mass = 0.0;    // known mass beyond n_max (0 when none)
  std::int64_t n_max = 0;

  double operator()(std::int64_t n) const {
    return (n >= 1 && n <= n_max) ? mass[static_cast<std::size_t>(n)] : 0.0;
  }
  double log_mass(std::int64_t n) const;  // -inf where K vanishes

  // Checks nonnegativity, total mass <= 1 and (for pure power laws) that
  // K(n) n^{1+alpha} sits within 5% of c_k at n_max/2 and n_max.
  void validate(bool power_law_tail = false) const;
};

// First return time to the origin of simple random walk paths constrained
// to stay positive in between: K+(2n) = Catalan(n-1) / 4^n, zero on odds.
// Total mass over all n is 1/2; the part beyond n_max goes to tail_mass.
InterArrivalLaw srw_first_return_law(std::int64_t n_max);

// K(n) = delta * n^{-(1+alpha)} / Z on {1..n_max} with Z the normalizer,
// so the total mass is exactly delta. Requires alpha > 0, 0 < delta < 1.
InterArrivalLaw power_law_law(double alpha, double delta, std::int64_t n_max);

// U(n) = P(n is a renewal epoch) and the smallest constant with
// U(n) <= cal_c * n^{-3/2} on the computed range.
struct RenewalFunction {
  std::vector<double> u;  // u[0..n_max], u[0] = 1
  double cal_c = 0.0;     // max over n >= 1 of u[n] * n^{3/2}
  std::int64_t argmax_n = 0;
  std::int64_t n_max = 0;

  double operator()(std::int64_t n) const {
    return (n >= 0 && n <= n_max) ? u[static_cast<std::size_t>(n)] : 0.0;
  }
};

// Convolution recursion U(0) = 1, U(n) = sum_{m<=n} K(m) U(n-m).
RenewalFunction renewal_function(const InterArrivalLaw& k);

// Free energy of the homogeneous model with reward h per contact:
// 0 if e^h delta <= 1, otherwise the root F of sum_n K(n) e^{-Fn+h} = 1,
// located by bisection to 1e-10 absolute.
double homogeneous_pinning_free_energy(const InterArrivalLaw& k, double h);

// Annealed reward factor M(beta, p) = p e^beta + (1 - p).
double annealed_reward(double beta, double p);

// Critical charge density of the averaged model: p^a(beta) = 1/(e^beta - 1).
double annealed_critical_p(double beta);

// CSV persistence: header "n,mass" (laws) or "n,u" (renewal functions),
// one row per index, full double precision.
void write_law_csv(std::ostream& out, const InterArrivalLaw& k);
void write_law_csv(const std::string& path, const InterArrivalLaw& k);
InterArrivalLaw read_law_csv(std::istream& in);
InterArrivalLaw read_law_csv(const std::string& path);
void write_renewal_csv(std::ostream& out, const RenewalFunction& u);
void write_renewal_csv(const std::string& path, const RenewalFunction& u);
RenewalFunction read_renewal_csv(std::istream& in);
RenewalFunction read_renewal_csv(const std::string& path);

}  // namespace pinlab
