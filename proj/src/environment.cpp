#include "pinlab/environment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pinlab/errors.hpp"
#include "pinlab/log_weight.hpp"

namespace pinlab {

double ChargeLaw::c_b() const {
  CompensatedSum s;
  for (double a : atoms) s.add(a);
  return s.value();
}

double ChargeLaw::ctilde_b() const {
  CompensatedSum s;
  for (std::size_t i = 1; i < atoms.size(); ++i) s.add(atoms[i]);
  return s.value();
}

double ChargeLaw::mean_positive() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    s.add(static_cast<double>(level + static_cast<std::int64_t>(i)) * atoms[i]);
  return s.value();
}

void ChargeLaw::validate() const {
  require(level >= 1, ErrorKind::InvalidArgument, "charge level must be >= 1");
  require(x_max >= level, ErrorKind::InvalidArgument,
          "support truncation below the charge level");
  require(atoms.size() == static_cast<std::size_t>(x_max - level) + 1,
          ErrorKind::InvalidArgument, "charge law has wrong table size");
  require(mass0 >= -1e-12 && lost_mass >= -1e-12, ErrorKind::InvalidArgument,
          "negative probability mass");
  for (double a : atoms)
    require(a >= 0.0, ErrorKind::InvalidArgument, "negative charge atom");
  double total = mass0 + c_b() + lost_mass;
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
          "charge law mass does not sum to 1");
}

ChargeLaw mu_beta(std::int64_t beta, double c) {
  require(beta >= 1, ErrorKind::InvalidArgument,
          "charge intensity must be a positive integer");
  require(c > 0.0, ErrorKind::InvalidArgument, "exponent rate must be > 0");
  ChargeLaw law;
  law.level = beta;
  law.x_max = beta;
  double p = std::exp(-c * static_cast<double>(beta));
  law.mass0 = 1.0 - p;
  law.atoms = {p};
  law.lost_mass = 0.0;
  return law;
}

ChargeLaw make_charge_law(
    std::int64_t level,
    const std::vector<std::pair<std::int64_t, double>>& atoms) {
  require(!atoms.empty(), ErrorKind::InvalidArgument,
          "charge law needs at least one atom");
  std::int64_t hi = level;
  for (const auto& [x, p] : atoms) {
    require(x >= level, ErrorKind::InvalidArgument,
            "atom below the charge level");
    require(p >= 0.0, ErrorKind::InvalidArgument, "negative atom mass");
    hi = std::max(hi, x);
  }
  ChargeLaw law;
  law.level = level;
  law.x_max = hi;
  law.atoms.assign(static_cast<std::size_t>(hi - level) + 1, 0.0);
  for (const auto& [x, p] : atoms)
    law.atoms[static_cast<std::size_t>(x - level)] += p;
  law.mass0 = 1.0 - law.c_b();
  law.lost_mass = 0.0;
  law.validate();
  return law;
}

void Environment::rebuild_locations() {
  t.assign(1, 0);
  t.reserve(gaps.size() + 1);
  for (std::int64_t g : gaps) t.push_back(t.back() + g);
}

void Environment::validate() const {
  require(!gaps.empty(), ErrorKind::InvalidArgument,
          "environment carries no positive charge");
  require(gaps.size() == etas.size(), ErrorKind::InvalidArgument,
          "gap/intensity length mismatch");
  require(t.size() == gaps.size() + 1 && t[0] == 0,
          ErrorKind::InvalidArgument, "stale location table");
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    require(gaps[i] >= 1, ErrorKind::InvalidArgument, "gap must be >= 1");
    require(etas[i] >= std::max<std::int64_t>(level, 1),
            ErrorKind::InvalidArgument, "intensity below the level");
    require(t[i + 1] == t[i] + gaps[i], ErrorKind::InvalidArgument,
            "stale location table");
  }
}

Environment make_environment(std::int64_t level, std::vector<std::int64_t> gaps,
                             std::vector<std::int64_t> etas) {
  Environment env;
  env.level = level;
  env.gaps = std::move(gaps);
  env.etas = std::move(etas);
  env.rebuild_locations();
  env.validate();
  return env;
}

Environment sample_environment(const ChargeLaw& law, std::int64_t n_charges,
                               SplitMix64& rng) {
  law.validate();
  require(n_charges >= 1, ErrorKind::InvalidArgument,
          "need at least one charge");
  double cb = law.c_b();
  require(cb > 0.0, ErrorKind::InvalidArgument,
          "law has no positive charges to place");
  std::vector<double> cum;
  cum.reserve(law.atoms.size());
  double run = 0.0;
  for (double a : law.atoms) cum.push_back(run += a);
  Environment env;
  env.level = law.level;
  env.gaps.reserve(static_cast<std::size_t>(n_charges));
  env.etas.reserve(static_cast<std::size_t>(n_charges));
  for (std::int64_t i = 0; i < n_charges; ++i) {
    env.gaps.push_back(sample_geometric(cb, rng));
    std::size_t idx = sample_cumulative(cum, rng);
    env.etas.push_back(law.level + static_cast<std::int64_t>(idx));
  }
  env.rebuild_locations();
  return env;
}

Environment sample_environment(const ChargeLaw& law, std::int64_t n_charges,
                               std::uint64_t seed) {
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  return sample_environment(law, n_charges, rng);
}

std::vector<std::int64_t> to_sites(const Environment& env, std::int64_t n) {
  require(n >= 0 && n <= env.span(), ErrorKind::InvalidArgument,
          "horizon exceeds the span of the environment");
  std::vector<std::int64_t> sites(static_cast<std::size_t>(n), 0);
  for (std::int64_t k = 1; k <= env.size(); ++k) {
    std::int64_t pos = env.location(k);
    if (pos > n) break;
    sites[static_cast<std::size_t>(pos - 1)] = env.eta(k);
  }
  return sites;
}

Environment from_sites(const std::vector<std::int64_t>& sites) {
  Environment env;
  std::int64_t prev = 0;
  std::int64_t min_eta = 0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    require(sites[j] >= 0, ErrorKind::InvalidArgument,
            "site values must be nonnegative");
    if (sites[j] > 0) {
      std::int64_t pos = static_cast<std::int64_t>(j) + 1;
      env.gaps.push_back(pos - prev);
      env.etas.push_back(sites[j]);
      min_eta = min_eta == 0 ? sites[j] : std::min(min_eta, sites[j]);
      prev = pos;
    }
  }
  require(!env.gaps.empty(), ErrorKind::InvalidArgument,
          "degenerate environment: no positive charge in the site sequence");
  env.level = min_eta;
  env.rebuild_locations();
  return env;
}

void save_environment(std::ostream& out, const Environment& env) {
  out << "#pinlab-env v1 level=" << env.level << "\n";
  for (std::size_t i = 0; i < env.gaps.size(); ++i)
    out << env.gaps[i] << "," << env.etas[i] << "\n";
}

void save_environment(const std::string& path, const Environment& env) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path);
  save_environment(out, env);
}

Environment load_environment(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::Config,
          "empty environment file");
  const std::string prefix = "#pinlab-env v1 level=";
  require(line.rfind(prefix, 0) == 0, ErrorKind::Config,
          "environment file must start with '" + prefix + "<b>'");
  Environment env;
  env.level = std::stoll(line.substr(prefix.size()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::Config,
            "malformed environment row: " + line);
    env.gaps.push_back(std::stoll(line.substr(0, comma)));
    env.etas.push_back(std::stoll(line.substr(comma + 1)));
  }
  env.rebuild_locations();
  env.validate();
  return env;
}

Environment load_environment(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot read " + path);
  return load_environment(in);
}

}  // namespace pinlab
