#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pinlab/errors.hpp"
#include "pinlab/renewal.hpp"
#include "test_helpers.hpp"

using namespace pinlab;
using namespace pinlab_test;

TEST_CASE("srw first-return law: small masses and path enumeration") {
  InterArrivalLaw k = srw_first_return_law(5000 * 2);
  CHECK(k(2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(k(4) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(k(6) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  CHECK(k(3) == 0.0);
  CHECK(k(7) == 0.0);
  for (int n = 2; n <= 16; ++n) {
    double oracle = srw_first_return_enumerated(n);
    CHECK(k(n) == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("srw first-return law: mass accumulates to one half") {
  InterArrivalLaw k = srw_first_return_law(5000 * 2);
  CHECK(std::abs(k.delta - 0.5) < 1e-2);
  CHECK(k.tail_mass == doctest::Approx(0.5 - k.delta));
  k.validate();
}

TEST_CASE("srw first-return law: tail constant along even sites") {
  InterArrivalLaw k = srw_first_return_law(10000);
  // k(m) m^{3/2} -> 1/sqrt(2 pi) on the even subsequence
  double at_end = k(10000) * std::pow(10000.0, 1.5);
  CHECK(at_end == doctest::Approx(k.c_k).epsilon(5e-3));
  // and the renewal function approaches c_k / (1 - delta)^2 on even sites
  InterArrivalLaw k2 = srw_first_return_law(1 << 13);
  RenewalFunction u = renewal_function(k2);
  double predicted = k2.c_k / ((1.0 - 0.5) * (1.0 - 0.5));
  double measured = u(k2.n_max) * std::pow(static_cast<double>(k2.n_max), 1.5);
  CHECK(std::abs(measured - predicted) <= 0.05 * predicted);
}

TEST_CASE("srw first-return law: horizon validation") {
  CHECK_THROWS_AS(srw_first_return_law(0), Error);
  CHECK_THROWS_AS(srw_first_return_law(1), Error);
  CHECK_THROWS_AS(srw_first_return_law(3), Error);
}

TEST_CASE("power law: single atom and exact normalization") {
  InterArrivalLaw k1 = power_law_law(0.5, 0.5, 1);
  CHECK(k1(1) == doctest::Approx(0.5).epsilon(1e-15));

  InterArrivalLaw k = power_law_law(0.5, 0.37, 2048);
  CHECK(k.delta == doctest::Approx(0.37).epsilon(1e-13));
  k.validate(true);
}

TEST_CASE("power law: pure power ratio") {
  InterArrivalLaw k = power_law_law(0.5, 0.5, 1024);
  CHECK(k(100) / k(400) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("power law: terminating-mass precondition") {
  CHECK_THROWS_AS(power_law_law(0.5, 1.0, 100), Error);
  CHECK_THROWS_AS(power_law_law(0.5, 1.5, 100), Error);
  CHECK_THROWS_AS(power_law_law(-0.5, 0.5, 100), Error);
}

TEST_CASE("renewal function: first values and the renewal identity") {
  InterArrivalLaw k = power_law_law(0.5, 0.6, 512);
  RenewalFunction u = renewal_function(k);
  CHECK(u(0) == 1.0);
  CHECK(u(1) == doctest::Approx(k(1)).epsilon(1e-15));
  CHECK(u(2) == doctest::Approx(k(2) + k(1) * k(1)).epsilon(1e-14));
  for (std::int64_t n = 1; n <= k.n_max; ++n) {
    double conv = 0.0;
    for (std::int64_t m = 1; m <= n; ++m) conv += k(m) * u(n - m);
    CHECK(u(n) == doctest::Approx(conv).epsilon(1e-12));
  }
}

TEST_CASE("renewal function: total renewal mass stays below 1/(1-delta)") {
  InterArrivalLaw k = power_law_law(0.5, 0.55, 4096);
  RenewalFunction u = renewal_function(k);
  double cap = 1.0 / (1.0 - k.delta);
  double run = 0.0;
  for (std::int64_t n = 1; n <= k.n_max; ++n) {
    run += u(n);
    CHECK(run <= cap + 1e-9);
  }
}

TEST_CASE("renewal function: polynomial tail constant") {
  // u(n) n^{3/2} approaches c_k / (1-delta)^2 for the alpha = 1/2 laws.
  for (double delta : {0.3, 0.5, 0.7}) {
    InterArrivalLaw k = power_law_law(0.5, delta, 1 << 14);
    RenewalFunction u = renewal_function(k);
    double predicted = k.c_k / ((1.0 - delta) * (1.0 - delta));
    double at_end = u(k.n_max) * std::pow(static_cast<double>(k.n_max), 1.5);
    CHECK(std::abs(at_end - predicted) <= 0.05 * predicted);
    CHECK(u.cal_c > 0.0);
    CHECK(u(u.argmax_n) * std::pow(static_cast<double>(u.argmax_n), 1.5) ==
          doctest::Approx(u.cal_c));
  }
}

TEST_CASE("homogeneous pinning: boundary reward gives zero free energy") {
  InterArrivalLaw k = power_law_law(0.5, 0.4, 2048);
  double h = -std::log(k.delta);
  CHECK(homogeneous_pinning_free_energy(k, h) == 0.0);
  CHECK(homogeneous_pinning_free_energy(k, h - 0.1) == 0.0);
  CHECK(homogeneous_pinning_free_energy(k, h + 0.1) > 0.0);
}

TEST_CASE("homogeneous pinning: srw wetting localizes exactly above M = 2") {
  InterArrivalLaw k = srw_first_return_law(10000);
  CHECK(homogeneous_pinning_free_energy(k, std::log(2.0)) == 0.0);
  CHECK(homogeneous_pinning_free_energy(k, std::log(1.5)) == 0.0);
  CHECK(homogeneous_pinning_free_energy(k, std::log(2.05)) > 1e-8);
  CHECK(homogeneous_pinning_free_energy(k, std::log(3.0)) > 1e-3);
}

TEST_CASE("homogeneous pinning: single-atom law solves in closed form") {
  InterArrivalLaw k = power_law_law(0.5, 0.5, 1);  // K(1) = 1/2
  double h = 1.7;
  // delta e^{h-F} = 1  =>  F = log(delta e^h)
  double expect = std::log(k.delta * std::exp(h));
  CHECK(homogeneous_pinning_free_energy(k, h) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("homogeneous pinning: nondecreasing and continuous in h") {
  InterArrivalLaw k = power_law_law(0.5, 0.45, 1024);
  double hc = -std::log(k.delta);
  double prev = 0.0;
  for (int i = -20; i <= 20; ++i) {
    double h = hc + 0.05 * i;
    double f = homogeneous_pinning_free_energy(k, h);
    CHECK(f >= prev - 1e-10);
    prev = f;
  }
  // Continuity at the critical reward: tiny overshoot gives tiny F.
  CHECK(homogeneous_pinning_free_energy(k, hc + 1e-6) < 1e-3);
}

TEST_CASE("annealed critical point") {
  CHECK(annealed_critical_p(std::log(2.0)) == doctest::Approx(1.0));
  CHECK(annealed_critical_p(std::log(3.0)) == doctest::Approx(0.5));
  for (double beta : {0.5, 1.0, 2.0, 5.0, 8.0}) {
    CHECK(annealed_reward(beta, annealed_critical_p(beta)) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(annealed_critical_p(0.0), Error);
  CHECK_THROWS_AS(annealed_critical_p(-1.0), Error);
}

TEST_CASE("law CSV round trip") {
  InterArrivalLaw k = power_law_law(0.5, 0.52, 64);
  std::stringstream buf;
  write_law_csv(buf, k);
  InterArrivalLaw back = read_law_csv(buf);
  REQUIRE(back.n_max == k.n_max);
  for (std::int64_t n = 1; n <= k.n_max; ++n) CHECK(back(n) == k(n));
  CHECK(back.delta == doctest::Approx(k.delta).epsilon(1e-15));

  std::stringstream bad("x,y\n1,0.5\n");
  CHECK_THROWS_AS(read_law_csv(bad), Error);
}

TEST_CASE("renewal CSV round trip") {
  InterArrivalLaw k = power_law_law(0.5, 0.5, 16);
  RenewalFunction u = renewal_function(k);
  std::stringstream buf;
  write_renewal_csv(buf, u);
  std::string first;
  std::getline(buf, first);
  CHECK(first == "n,u");
  buf.seekg(0);
  RenewalFunction back = read_renewal_csv(buf);
  REQUIRE(back.n_max == u.n_max);
  for (std::int64_t n = 0; n <= u.n_max; ++n) CHECK(back(n) == u(n));
  CHECK(back.cal_c == doctest::Approx(u.cal_c).epsilon(1e-15));
  CHECK(back.argmax_n == u.argmax_n);
}
