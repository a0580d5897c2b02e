#include "pinlab/measure_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "pinlab/errors.hpp"
#include "pinlab/log_weight.hpp"

namespace pinlab {

namespace {

// Dense nonnegative vector supported on [min_x, min_x + size - 1].
struct SpanVec {
  std::int64_t min_x = 0;
  std::vector<double> v;

  double mass() const {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
  }
};

// Convolution truncated at x_max; mass of cells pushed past x_max goes to
// *lost. Kahan-compensated cells.
SpanVec conv_truncated(const SpanVec& a, const SpanVec& b, std::int64_t x_max,
                       double* lost) {
  SpanVec out;
  if (a.v.empty() || b.v.empty()) {
    out.min_x = x_max + 1;
    return out;
  }
  out.min_x = a.min_x + b.min_x;
  if (out.min_x > x_max) {
    CompensatedSum l;
    l.add(*lost);
    l.add(a.mass() * b.mass());
    *lost = l.value();
    out.v.clear();
    return out;  // empty
  }
  std::int64_t top = std::min<std::int64_t>(
      x_max, a.min_x + b.min_x + static_cast<std::int64_t>(a.v.size()) +
                 static_cast<std::int64_t>(b.v.size()) - 2);
  out.v.assign(static_cast<std::size_t>(top - out.min_x) + 1, 0.0);
  std::vector<double> carry(out.v.size(), 0.0);
  CompensatedSum lost_here;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    if (a.v[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.v.size(); ++j) {
      double prod = a.v[i] * b.v[j];
      if (prod == 0.0) continue;
      std::int64_t x = a.min_x + static_cast<std::int64_t>(i) + b.min_x +
                       static_cast<std::int64_t>(j);
      if (x > x_max) {
        lost_here.add(prod);
        continue;
      }
      std::size_t idx = static_cast<std::size_t>(x - out.min_x);
      double y = prod - carry[idx];
      double t = out.v[idx] + y;
      carry[idx] = (t - out.v[idx]) - y;
      out.v[idx] = t;
    }
  }
  CompensatedSum l;
  l.add(*lost);
  l.add(lost_here.value());
  *lost = l.value();
  return out;
}

// (1 - c)^{e} for huge exponents, via logs.
long double pow_one_minus(double c, long double e) {
  if (c >= 1.0) return e == 0.0L ? 1.0L : 0.0L;
  return std::exp(e * static_cast<long double>(std::log1p(-c)));
}

}  // namespace

double block_escape_prob(double c_b, const RenormParams& p) {
  require(c_b >= 0.0 && c_b <= 1.0, ErrorKind::InvalidArgument,
          "density must lie in [0, 1]");
  if (c_b == 0.0) return 1.0;
  return static_cast<double>(pow_one_minus(c_b, p.l_real));
}

std::int64_t default_flow_x_max(const ChargeLaw& mu, const RenormParams& p) {
  return 20 * (p.b + 2 * p.k_b) + (mu.x_max - mu.level) + mu.x_max;
}

ChargeLaw step_law(const ChargeLaw& mu, const RenormParams& p,
                   std::int64_t x_max, double tol) {
  mu.validate();
  require(mu.level == p.b, ErrorKind::InvalidArgument,
          "law level does not match the renormalization level");
  require(x_max >= p.b + 1, ErrorKind::InvalidArgument,
          "support truncation below the new level");
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be > 0");
  const double cb = mu.c_b();
  require(cb > 0.0, ErrorKind::InvalidArgument,
          "law carries no positive charges");
  require(cb < 1.0, ErrorKind::InvalidArgument,
          "density 1 never produces an inter-block gap");
  const double q = block_escape_prob(cb, p);

  // Gap-value measure: weight of level m sits at shift 2 k_b - m with the
  // geometric range sum over its gaps.
  auto levels = gap_log_levels(p.l_real);
  SpanVec rho;
  {
    std::int64_t m_top = levels.back().m;
    rho.min_x = 2 * p.k_b - m_top;
    rho.v.assign(static_cast<std::size_t>(m_top) + 1, 0.0);
    for (const auto& lv : levels) {
      long double w =
          (pow_one_minus(cb, lv.lo - 1.0L) - pow_one_minus(cb, lv.hi)) /
          static_cast<long double>(cb);
      std::int64_t shift = 2 * p.k_b - lv.m;
      rho.v[static_cast<std::size_t>(shift - rho.min_x)] =
          static_cast<double>(w);
    }
  }
  // Each cluster factor advances the support by at least this much; the
  // series terminates by support once it is positive.
  std::int64_t min_increment = p.b + rho.min_x;
  require(min_increment >= 1, ErrorKind::InvalidArgument,
          "override parameters make the cluster support non-advancing");

  SpanVec hat;  // the positive part of mu
  hat.min_x = mu.level;
  hat.v = mu.atoms;

  double lost_conv = 0.0;
  SpanVec kernel = conv_truncated(rho, hat, x_max, &lost_conv);

  // Accumulate q * sum_{n>=1} hat * kernel^{*n} plus q * mu on [b+1, inf).
  ChargeLaw out;
  out.level = p.b + 1;
  out.x_max = x_max;
  out.atoms.assign(static_cast<std::size_t>(x_max - out.level) + 1, 0.0);
  std::vector<double> carry(out.atoms.size(), 0.0);
  auto deposit = [&](std::int64_t x, double mass) {
    if (mass == 0.0 || x < out.level || x > x_max) return;
    std::size_t idx = static_cast<std::size_t>(x - out.level);
    double y = mass - carry[idx];
    double t = out.atoms[idx] + y;
    carry[idx] = (t - out.atoms[idx]) - y;
    out.atoms[idx] = t;
  };

  for (std::int64_t x = std::max(mu.level, out.level); x <= mu.x_max; ++x)
    deposit(x, q * mu.at(x));

  // Term n of the cluster series is hat * kernel^{*n} with total mass
  // c_b (1-q)^n before truncation; stop once the remaining series mass is
  // below tol. Termination is guaranteed either way: every kernel factor
  // advances the support by min_increment.
  SpanVec acc = hat;
  for (std::int64_t n = 1;; ++n) {
    acc = conv_truncated(acc, kernel, x_max, &lost_conv);
    if (acc.v.empty()) break;
    bool any = false;
    for (std::size_t i = 0; i < acc.v.size(); ++i) {
      if (acc.v[i] == 0.0) continue;
      any = true;
      deposit(acc.min_x + static_cast<std::int64_t>(i), q * acc.v[i]);
    }
    if (!any) break;
    double residual = cb * std::pow(1.0 - q, static_cast<double>(n + 1));
    if (residual < tol) break;
  }

  // Exact bookkeeping: the positive mass of the stepped law is
  // q ctilde + (1-q) c; whatever the truncated convolution did not place
  // in the kept support is lost.
  const double target_positive = q * mu.ctilde_b() + (1.0 - q) * cb;
  out.mass0 = 1.0 - mu.lost_mass - target_positive;
  double placed = 0.0;
  {
    CompensatedSum s;
    for (double a : out.atoms) s.add(a);
    placed = s.value();
  }
  out.lost_mass = mu.lost_mass + std::max(0.0, target_positive - placed);
  out.validate();
  return out;
}

double stepped_zero_mass(const ChargeLaw& mu, const RenormParams& p) {
  double q = block_escape_prob(mu.c_b(), p);
  return 1.0 - (q * mu.ctilde_b() + (1.0 - q) * mu.c_b());
}

double step_constant(double c_const, const RenormParams& p) {
  return renormalize_constant(c_const, p.k_b, p.big_b);
}

bool constant_flow_bounded(std::int64_t beta, double k0, double big_b) {
  if (beta < 2) return false;
  // sum_{a >= beta} a^{-2} <= 1/(beta - 1)
  double tail = 1.0 / static_cast<double>(beta - 1);
  return big_b * std::exp(1.0 - k0) * tail <= std::log(2.0);
}

DominationReport domination_check(const ChargeLaw& mu) {
  DominationReport rep;
  rep.log_ratio = -std::numeric_limits<double>::infinity();
  rep.lost_mass = mu.lost_mass;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (mu.atoms[i] == 0.0) continue;
    double x = static_cast<double>(mu.level + static_cast<std::int64_t>(i));
    double lr = std::log(mu.atoms[i]) + (2.0 / 3.0) * x + std::sqrt(x);
    if (lr > rep.log_ratio) {
      rep.log_ratio = lr;
      rep.argmax_x = mu.level + static_cast<std::int64_t>(i);
    }
  }
  rep.ratio = std::isinf(rep.log_ratio) && rep.log_ratio < 0
                  ? 0.0
                  : std::exp(rep.log_ratio);
  return rep;
}

double rough_upper_bound(const ChargeLaw& mu, double c_const, double a_const) {
  require(c_const > 0.0 && a_const > 0.0, ErrorKind::InvalidArgument,
          "constants must be positive");
  return mu.mean_positive() +
         (1.0 - mu.mass0) * std::log(c_const / a_const);
}

FlowState iterate_flow(const ChargeLaw& mu_start, double cal_c, double k0,
                       double big_b, double a_const, std::int64_t b_max,
                       std::int64_t x_max, double tol,
                       const std::vector<RenormParams>* overrides) {
  mu_start.validate();
  require(b_max >= mu_start.level, ErrorKind::InvalidArgument,
          "target level below the starting level");
  FlowState state;
  state.law = mu_start;
  state.c_const = cal_c;
  state.derived_mode = overrides == nullptr;

  for (std::int64_t b = mu_start.level; b <= b_max; ++b) {
    RenormParams p;
    if (overrides) {
      std::size_t idx = static_cast<std::size_t>(b - mu_start.level);
      require(idx < overrides->size(), ErrorKind::InvalidArgument,
              "override list shorter than the flow");
      p = (*overrides)[idx];
      require(p.b == b, ErrorKind::InvalidArgument,
              "override level mismatch");
      p.c = state.c_const;
    } else {
      p = renorm_constants(b, cal_c, k0, big_b, state.c_const);
    }

    FlowRecord rec;
    rec.b = b;
    rec.c_b = state.law.c_b();
    rec.ctilde_b = state.law.ctilde_b();
    rec.mu0 = state.law.mass0;
    rec.lost_mass = state.law.lost_mass;
    rec.c_const = state.c_const;
    rec.q_b = rec.c_b > 0.0 ? block_escape_prob(rec.c_b, p) : 1.0;
    rec.rough_bound = rough_upper_bound(state.law, state.c_const, a_const);
    DominationReport dom = domination_check(state.law);
    rec.domination_ratio = dom.ratio;
    rec.domination_log_ratio = dom.log_ratio;
    state.history.push_back(rec);

    if (b == b_max) break;

    if (rec.c_b > 0.0) {
      std::int64_t cap = x_max > 0 ? x_max : default_flow_x_max(state.law, p);
      state.law = step_law(state.law, p, cap, tol);
    } else {
      // The positive part already died out; the law only relabels.
      state.law.level = b + 1;
      state.law.x_max = std::max(state.law.x_max, b + 1);
      state.law.atoms.assign(
          static_cast<std::size_t>(state.law.x_max - state.law.level) + 1,
          0.0);
    }
    require(state.law.lost_mass <= 100.0 * tol, ErrorKind::Overflow,
            "truncation lost more mass than the tolerance budget; "
            "raise x_max");
    state.c_const = step_constant(state.c_const, p);
  }
  return state;
}

void write_flow_csv(std::ostream& out, const FlowState& state) {
  out << "# mode=" << (state.derived_mode ? "derived" : "override") << "\n";
  out << "b,q_b,c_b,ctilde_b,mu0,lost_mass,C_b,rough_bound,domination_ratio"
      << "\n";
  char buf[256];
  for (const auto& r : state.history) {
    std::snprintf(buf, sizeof buf,
                  "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                  static_cast<long long>(r.b), r.q_b, r.c_b, r.ctilde_b,
                  r.mu0, r.lost_mass, r.c_const, r.rough_bound,
                  r.domination_ratio);
    out << buf << "\n";
  }
}

}  // namespace pinlab
