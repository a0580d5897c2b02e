#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/renorm.hpp"

namespace pinlab {

// P(gap > l_b) = (1 - c_b)^{l_b}, evaluated through logs so it survives
// thresholds far beyond the integer range and densities far below 1.
double block_escape_prob(double c_b, const RenormParams& p);

// Default support truncation for one flow step: generous multiple of the
// per-cluster growth plus the span of the incoming support.
std::int64_t default_flow_x_max(const ChargeLaw& mu, const RenormParams& p);

// One step of the deterministic flow on charge laws. The clustered part is
// evaluated by aggregating gaps into the levels of floor(1.5 log gap) with
// closed-form geometric range sums, never by iterating gaps up to l_b.
// The cluster series is truncated once its residual mass drops below tol;
// mass pushed past x_max is recorded in lost_mass, never dropped silently.
ChargeLaw step_law(const ChargeLaw& mu, const RenormParams& p,
                   std::int64_t x_max, double tol);

// Zero-mass closed form for the stepped law: 1 - (q_b ctilde_b + (1-q_b) c_b),
// relative to the kept atoms of mu (mass already lost stays lost).
double stepped_zero_mass(const ChargeLaw& mu, const RenormParams& p);

// C_{b+1} = (1 + B e^{-k_b} C_b) C_b.
double step_constant(double c_const, const RenormParams& p);

// Whether the starting level is high enough that the lifted constants stay
// below 2 cal_c forever: B e^{1-k0} sum_{a>=beta} a^{-2} <= log 2, with the
// tail enclosed from above.
bool constant_flow_bounded(std::int64_t beta, double k0, double big_b);

struct DominationReport {
  double ratio = 0.0;      // max over kept atoms of mu(x) e^{(2/3)x + sqrt x}
  double log_ratio = 0.0;  // same in logs (-inf for an empty law)
  std::int64_t argmax_x = 0;
  double lost_mass = 0.0;  // the kept-support check says nothing about this
};
DominationReport domination_check(const ChargeLaw& mu);

// E_mu(omega_1) + (1 - mu(0)) log(c_const / a_const).
double rough_upper_bound(const ChargeLaw& mu, double c_const, double a_const);

struct FlowRecord {
  std::int64_t b = 0;
  double q_b = 0.0;
  double c_b = 0.0;
  double ctilde_b = 0.0;
  double mu0 = 0.0;
  double lost_mass = 0.0;
  double c_const = 0.0;
  double rough_bound = 0.0;
  double domination_ratio = 0.0;
  double domination_log_ratio = 0.0;
};

struct FlowState {
  ChargeLaw law;          // the final law
  double c_const = 0.0;   // the final constant
  bool derived_mode = true;
  std::vector<FlowRecord> history;  // one record per level visited
};

// Runs the flow from mu_start's level up to b_max, recording per-level
// diagnostics. Parameters are derived from (cal_c, k0, big_b) unless an
// override list supplies one entry per level. Throws Overflow when the
// accumulated lost mass exceeds 100 * tol (raise x_max).
FlowState iterate_flow(const ChargeLaw& mu_start, double cal_c, double k0,
                       double big_b, double a_const, std::int64_t b_max,
                       std::int64_t x_max = 0, double tol = 1e-12,
                       const std::vector<RenormParams>* overrides = nullptr);

// CSV history: a "# mode=..." comment line, then
// b,q_b,c_b,ctilde_b,mu0,lost_mass,C_b,rough_bound,domination_ratio.
void write_flow_csv(std::ostream& out, const FlowState& state);

}  // namespace pinlab
