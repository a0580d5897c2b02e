#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pinlab/environment.hpp"
#include "pinlab/errors.hpp"
#include "test_helpers.hpp"

using namespace pinlab;
using namespace pinlab_test;

TEST_CASE("mu_beta: two-atom structure") {
  ChargeLaw law = mu_beta(6, 0.7);
  CHECK(law.level == 6);
  CHECK(law.at(6) == doctest::Approx(std::exp(-4.2)).epsilon(1e-15));
  CHECK(law.at(6) == doctest::Approx(1.4996e-2).epsilon(1e-4));
  CHECK(law.mass0 == doctest::Approx(1.0 - std::exp(-4.2)).epsilon(1e-15));
  CHECK(law.at(5) == 0.0);
  CHECK(law.at(7) == 0.0);
  CHECK(law.c_b() == doctest::Approx(std::exp(-4.2)).epsilon(1e-15));
  CHECK(law.ctilde_b() == 0.0);
  law.validate();
}

TEST_CASE("mu_beta: dense-rate limit and input validation") {
  ChargeLaw law = mu_beta(3, 50.0);
  CHECK(law.mass0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mu_beta(0, 0.7), Error);
  CHECK_THROWS_AS(mu_beta(5, 0.0), Error);
  CHECK_THROWS_AS(mu_beta(5, -1.0), Error);
}

TEST_CASE("sampling: unit charge density packs every site") {
  ChargeLaw law = make_charge_law(2, {{2, 1.0}});
  Environment env = sample_environment(law, 50, 12345u);
  REQUIRE(env.size() == 50);
  for (std::int64_t k = 1; k <= env.size(); ++k) {
    CHECK(env.gap(k) == 1);
    CHECK(env.eta(k) == 2);
  }
}

TEST_CASE("sampling: geometric gap mean within three standard errors") {
  ChargeLaw law = make_charge_law(1, {{1, 0.15}, {2, 0.1}});
  const std::int64_t n = 100000;
  Environment env = sample_environment(law, n, 777u);
  double cb = law.c_b();
  double mean = static_cast<double>(env.span()) / static_cast<double>(n);
  double se = std::sqrt(1.0 - cb) / cb / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 1.0 / cb) <= 3.0 * se);
}

TEST_CASE("sampling: intensities follow the conditional law (chi-square)") {
  ChargeLaw law = make_charge_law(3, {{3, 0.12}, {4, 0.06}, {6, 0.02}});
  const std::int64_t n = 100000;
  Environment env = sample_environment(law, n, 2024u);
  double cb = law.c_b();
  std::vector<double> observed(3, 0.0), expected(3, 0.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    if (env.eta(k) == 3) observed[0] += 1;
    if (env.eta(k) == 4) observed[1] += 1;
    if (env.eta(k) == 6) observed[2] += 1;
  }
  expected[0] = 0.12 / cb * static_cast<double>(n);
  expected[1] = 0.06 / cb * static_cast<double>(n);
  expected[2] = 0.02 / cb * static_cast<double>(n);
  CHECK(chi_square_stat(observed, expected) < chi_square_crit_99(2));
}

TEST_CASE("sampling: Kolmogorov-Smirnov distance of the gap law") {
  ChargeLaw law = make_charge_law(2, {{2, 0.2}});
  const std::int64_t n = 100000;
  Environment env = sample_environment(law, n, 99u);
  double cb = law.c_b();
  std::vector<double> cdf;
  for (int g = 1; g <= 400; ++g)
    cdf.push_back(1.0 - std::pow(1.0 - cb, static_cast<double>(g)));
  double crit = 1.6276 / std::sqrt(static_cast<double>(n));  // 1% level
  CHECK(ks_distance(env.gaps, cdf) < crit);
}

TEST_CASE("sampling: deterministic for a fixed seed, distinct across seeds") {
  ChargeLaw law = mu_beta(4, 0.4);
  Environment a = sample_environment(law, 1000, 5u);
  Environment b = sample_environment(law, 1000, 5u);
  Environment c = sample_environment(law, 1000, 6u);
  CHECK(a.gaps == b.gaps);
  CHECK(a.etas == b.etas);
  CHECK(a.gaps != c.gaps);
}

TEST_CASE("sampling: per-replica streams are independent of iteration") {
  ChargeLaw law = mu_beta(4, 0.4);
  SplitMix64 s3 = SplitMix64::stream(42u, 3);
  Environment direct = sample_environment(law, 100, s3);
  SplitMix64 s3b = SplitMix64::stream(42u, 3);
  Environment again = sample_environment(law, 100, s3b);
  CHECK(direct.gaps == again.gaps);
  CHECK(direct.etas == again.etas);
}

TEST_CASE("sampling: degenerate law rejected") {
  ChargeLaw zero = make_charge_law(2, {{2, 0.0}});
  CHECK_THROWS_AS(sample_environment(zero, 10, 1u), Error);
}

TEST_CASE("site conversion: single charge placement") {
  Environment env = make_environment(5, {2}, {5});
  auto sites = to_sites(env, 2);
  REQUIRE(sites.size() == 2);
  CHECK(sites[0] == 0);
  CHECK(sites[1] == 5);

  auto prefix = to_sites(env, 1);
  CHECK(prefix == std::vector<std::int64_t>{0});

  CHECK_THROWS_AS(to_sites(env, 3), Error);
}

TEST_CASE("site conversion: round trips") {
  Environment env = make_environment(2, {3, 1, 7}, {4, 2, 9});
  Environment back = from_sites(to_sites(env, env.span()));
  CHECK(back.gaps == env.gaps);
  CHECK(back.etas == env.etas);

  std::vector<std::int64_t> sites = {0, 0, 3, 0, 1};
  auto round = to_sites(from_sites(sites), 5);
  CHECK(round == sites);

  std::vector<std::int64_t> zeros(8, 0);
  CHECK_THROWS_AS(from_sites(zeros), Error);
}

TEST_CASE("environment file format round trip and validation") {
  Environment env = make_environment(3, {10, 2, 5}, {7, 3, 3});
  std::stringstream buf;
  save_environment(buf, env);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "#pinlab-env v1 level=3");
  buf.seekg(0);
  Environment back = load_environment(buf);
  CHECK(back.level == 3);
  CHECK(back.gaps == env.gaps);
  CHECK(back.etas == env.etas);

  std::stringstream bad_header("#env level=3\n1,5\n");
  CHECK_THROWS_AS(load_environment(bad_header), Error);
  std::stringstream bad_gap("#pinlab-env v1 level=3\n0,5\n");
  CHECK_THROWS_AS(load_environment(bad_gap), Error);
  std::stringstream low_eta("#pinlab-env v1 level=3\n4,2\n");
  CHECK_THROWS_AS(load_environment(low_eta), Error);
}
