#include "pinlab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pinlab/errors.hpp"
#include "pinlab/log_weight.hpp"

namespace pinlab {

double InterArrivalLaw::log_mass(std::int64_t n) const {
  double m = (*this)(n);
  return m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
}

void InterArrivalLaw::validate(bool power_law_tail) const {
  require(n_max >= 1 && mass.size() == static_cast<std::size_t>(n_max) + 1,
          ErrorKind::InvalidArgument, "inter-arrival law has wrong table size");
  require(mass[0] == 0.0, ErrorKind::InvalidArgument,
          "inter-arrival mass at 0 must vanish");
  CompensatedSum s;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    require(mass[static_cast<std::size_t>(n)] >= 0.0,
            ErrorKind::InvalidArgument, "negative inter-arrival mass");
    s.add(mass[static_cast<std::size_t>(n)]);
  }
  require(s.value() <= 1.0 + 1e-12, ErrorKind::InvalidArgument,
          "inter-arrival mass exceeds 1");
  require(std::abs(s.value() - delta) <= 1e-12, ErrorKind::InvalidArgument,
          "stored delta does not match the mass table");
  if (power_law_tail) {
    for (std::int64_t n : {n_max / 2, n_max}) {
      if (n < 1) continue;
      double v = (*this)(n)*std::pow(static_cast<double>(n), 1.0 + alpha);
      require(std::abs(v - c_k) <= 0.05 * c_k, ErrorKind::InvalidArgument,
              "power-law tail constant off by more than 5%");
    }
  }
}

InterArrivalLaw srw_first_return_law(std::int64_t n_max) {
  require(n_max >= 2 && n_max % 2 == 0, ErrorKind::InvalidArgument,
          "srw_first_return_law needs an even horizon >= 2");
  InterArrivalLaw k;
  k.n_max = n_max;
  k.alpha = 0.5;
  k.mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  // K+(2) = 1/4 and K+(2n+2)/K+(2n) = (2n-1)/(2n+2).
  double v = 0.25;
  CompensatedSum total;
  for (std::int64_t n = 1; 2 * n <= n_max; ++n) {
    k.mass[static_cast<std::size_t>(2 * n)] = v;
    total.add(v);
    v *= static_cast<double>(2 * n - 1) / static_cast<double>(2 * n + 2);
  }
  k.delta = total.value();
  k.tail_mass = 0.5 - k.delta;
  // Catalan(n-1)/4^n ~ n^{-3/2}/(4 sqrt(pi)), so along even m the tail
  // constant is 2^{3/2}/(4 sqrt(pi)) = 1/sqrt(2 pi). Consistent with the
  // renewal asymptotics u(m) m^{3/2} -> c_k/(1-delta)^2.
  k.c_k = 1.0 / std::sqrt(2.0 * M_PI);
  return k;
}

InterArrivalLaw power_law_law(double alpha, double delta, std::int64_t n_max) {
  require(alpha > 0.0, ErrorKind::InvalidArgument, "tail exponent must be > 0");
  require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument,
          "total mass must lie in (0, 1): the law must terminate");
  require(n_max >= 1, ErrorKind::InvalidArgument, "horizon must be >= 1");
  InterArrivalLaw k;
  k.n_max = n_max;
  k.alpha = alpha;
  k.mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  CompensatedSum z;
  for (std::int64_t n = 1; n <= n_max; ++n)
    z.add(std::pow(static_cast<double>(n), -(1.0 + alpha)));
  const double scale = delta / z.value();
  CompensatedSum total;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double m = scale * std::pow(static_cast<double>(n), -(1.0 + alpha));
    k.mass[static_cast<std::size_t>(n)] = m;
    total.add(m);
  }
  k.delta = total.value();
  k.tail_mass = 0.0;
  k.c_k = scale;
  return k;
}

RenewalFunction renewal_function(const InterArrivalLaw& k) {
  k.validate();
  RenewalFunction r;
  r.n_max = k.n_max;
  r.u.assign(static_cast<std::size_t>(k.n_max) + 1, 0.0);
  r.u[0] = 1.0;
  for (std::int64_t n = 1; n <= k.n_max; ++n) {
    CompensatedSum s;
    for (std::int64_t m = 1; m <= n; ++m)
      s.add(k.mass[static_cast<std::size_t>(m)] *
            r.u[static_cast<std::size_t>(n - m)]);
    r.u[static_cast<std::size_t>(n)] = s.value();
  }
  r.cal_c = 0.0;
  r.argmax_n = 0;
  for (std::int64_t n = 1; n <= k.n_max; ++n) {
    double v = r.u[static_cast<std::size_t>(n)] *
               std::pow(static_cast<double>(n), 1.5);
    if (v > r.cal_c) {
      r.cal_c = v;
      r.argmax_n = n;
    }
  }
  return r;
}

namespace {

// sum_n K(n) e^{-F n + h}; the weights stay O(e^h), safe in linear domain.
double tilted_mass(const InterArrivalLaw& k, double h, double f) {
  CompensatedSum s;
  for (std::int64_t n = 1; n <= k.n_max; ++n) {
    double m = k.mass[static_cast<std::size_t>(n)];
    if (m > 0.0) s.add(m * std::exp(h - f * static_cast<double>(n)));
  }
  return s.value();
}

}  // namespace

double homogeneous_pinning_free_energy(const InterArrivalLaw& k, double h) {
  require(std::isfinite(h), ErrorKind::InvalidArgument,
          "contact reward must be finite");
  require(k.delta > 0.0, ErrorKind::InvalidArgument, "law carries no mass");
  if (std::exp(h) * k.delta <= 1.0) return 0.0;
  // Root bracket: at F = h + log(1/delta) + 1 the tilted mass is at most
  // e^{h-F} delta = delta^2 / e < 1.
  double lo = 0.0;
  double hi = h + std::log(1.0 / k.delta) + 1.0;
  require(hi < 700.0, ErrorKind::Overflow,
          "pinning reward pushes the free energy out of double range");
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    double mid = 0.5 * (lo + hi);
    (tilted_mass(k, h, mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double annealed_reward(double beta, double p) {
  return p * std::exp(beta) + (1.0 - p);
}

double annealed_critical_p(double beta) {
  require(beta > 0.0, ErrorKind::InvalidArgument,
          "charge intensity must be positive");
  return 1.0 / std::expm1(beta);
}

namespace {

void write_indexed_csv(std::ostream& out, const char* header,
                       const std::vector<double>& v, std::int64_t first) {
  out << header << "\n";
  char buf[64];
  for (std::size_t i = static_cast<std::size_t>(first); i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g", i, v[i]);
    out << buf << "\n";
  }
}

}  // namespace

void write_law_csv(std::ostream& out, const InterArrivalLaw& k) {
  write_indexed_csv(out, "n,mass", k.mass, 1);
}

void write_law_csv(const std::string& path, const InterArrivalLaw& k) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path);
  write_law_csv(out, k);
}

InterArrivalLaw read_law_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == "n,mass",
          ErrorKind::Config, "law CSV must start with header 'n,mass'");
  InterArrivalLaw k;
  k.mass.assign(1, 0.0);
  CompensatedSum total;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::Config,
            "malformed law CSV row: " + line);
    std::int64_t n = std::stoll(line.substr(0, comma));
    double m = std::stod(line.substr(comma + 1));
    require(n == static_cast<std::int64_t>(k.mass.size()), ErrorKind::Config,
            "law CSV rows must be consecutive from n=1");
    k.mass.push_back(m);
    total.add(m);
  }
  k.n_max = static_cast<std::int64_t>(k.mass.size()) - 1;
  k.delta = total.value();
  // Tail metadata is not stored in the CSV; keep the defaults and use the
  // mass table as ground truth.
  k.c_k = k.n_max >= 1
              ? k.mass.back() * std::pow(static_cast<double>(k.n_max), 1.5)
              : 0.0;
  k.validate();
  return k;
}

InterArrivalLaw read_law_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot read " + path);
  return read_law_csv(in);
}

void write_renewal_csv(std::ostream& out, const RenewalFunction& u) {
  write_indexed_csv(out, "n,u", u.u, 0);
}

void write_renewal_csv(const std::string& path, const RenewalFunction& u) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path);
  write_renewal_csv(out, u);
}

RenewalFunction read_renewal_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == "n,u",
          ErrorKind::Config, "renewal CSV must start with header 'n,u'");
  RenewalFunction r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::Config,
            "malformed renewal CSV row: " + line);
    std::int64_t n = std::stoll(line.substr(0, comma));
    require(n == static_cast<std::int64_t>(r.u.size()), ErrorKind::Config,
            "renewal CSV rows must be consecutive from n=0");
    r.u.push_back(std::stod(line.substr(comma + 1)));
  }
  require(!r.u.empty() && r.u[0] == 1.0, ErrorKind::Config,
          "renewal table must start with u(0) = 1");
  r.n_max = static_cast<std::int64_t>(r.u.size()) - 1;
  for (std::int64_t n = 1; n <= r.n_max; ++n) {
    double v = r.u[static_cast<std::size_t>(n)] *
               std::pow(static_cast<double>(n), 1.5);
    if (v > r.cal_c) {
      r.cal_c = v;
      r.argmax_n = n;
    }
  }
  return r;
}

RenewalFunction read_renewal_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot read " + path);
  return read_renewal_csv(in);
}

}  // namespace pinlab
