#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "uavlos/markov.hpp"
#include "uavlos/random.hpp"

using namespace uavlos;

namespace {

StateTrace make_trace(std::initializer_list<int> bits, double dd = 2.0) {
  StateTrace t{dd, {}};
  for (int b : bits) t.states.push_back(b ? LinkState::los : LinkState::nlos);
  return t;
}

// Alternating renewal process with exponential sojourns in continuous
// distance, sampled at arbitrary pitch.
StateTrace sample_continuous(double mu, double lambda, double length,
                             double pitch, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> switches;
  double x = 0.0;
  bool los = false;
  while (x < length) {
    x += -std::log1p(-rng.uniform()) / (los ? lambda : mu);
    switches.push_back(x);
    los = !los;
  }
  StateTrace t{pitch, {}};
  std::size_t k = 0;
  los = false;
  for (double d = 0.0; d < length; d += pitch) {
    while (k < switches.size() && switches[k] <= d) {
      los = !los;
      ++k;
    }
    t.states.push_back(los ? LinkState::los : LinkState::nlos);
  }
  return t;
}

double recovery_error(std::size_t steps, std::uint64_t seed) {
  const MarkovRates truth{0.05, 0.02};
  const StateTrace t = simulate_two_state(truth, 2.0, steps, LinkState::nlos, seed);
  const MarkovRates r = rates_from_transitions(estimate_transitions(t), 2.0);
  return std::max(std::fabs(r.mu / truth.mu - 1), std::fabs(r.lambda / truth.lambda - 1));
}

} // namespace

TEST_CASE("transition estimates from hand-counted traces") {
  const TransitionEstimate ones = estimate_transitions(make_trace({1, 1, 1, 1}));
  CHECK(*ones.p11() == 1.0);
  CHECK(*ones.p10() == 0.0);
  CHECK_FALSE(ones.p01());
  CHECK_FALSE(ones.p00());

  const TransitionEstimate alt = estimate_transitions(make_trace({0, 1, 0, 1, 0, 1}));
  CHECK(*alt.p01() == 1.0);
  CHECK(*alt.p10() == 1.0);

  const TransitionEstimate mix = estimate_transitions(make_trace({0, 0, 1, 1, 0, 0, 1, 1}));
  CHECK(mix.n0() == 4);
  CHECK(mix.n1() == 3);
  CHECK(*mix.p01() == 0.5);
  CHECK(*mix.p10() == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(estimate_transitions(make_trace({1})), std::invalid_argument);
  CHECK_THROWS_AS(estimate_transitions(make_trace({1, 0}, 0.0)), std::invalid_argument);
}

TEST_CASE("estimated rows are exactly stochastic") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    StateTrace t{1.0, {}};
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0, 200));
    const double bias = rng.uniform();
    for (std::size_t k = 0; k < n; ++k)
      t.states.push_back(rng.uniform() < bias ? LinkState::los : LinkState::nlos);
    const TransitionEstimate e = estimate_transitions(t);
    if (e.p01()) REQUIRE(*e.p00() + *e.p01() == 1.0);
    if (e.p10()) REQUIRE(*e.p10() + *e.p11() == 1.0);
    REQUIRE(e.n0() + e.n1() == n - 1);
  }
}

TEST_CASE("rates from transition probabilities") {
  CHECK(rates_from_probabilities(0.0, 0.3, 2.0).mu == 0.0);
  CHECK(std::fabs(rates_from_probabilities(0.1, 0.0, 2.0).mu - 0.05268) < 1e-5);
  CHECK(rates_from_probabilities(0.1, 0.0, 2.0).mu ==
        doctest::Approx(-std::log(0.9) / 2.0));
  CHECK_THROWS_AS(rates_from_probabilities(1.0, 0.1, 2.0), std::domain_error);
  CHECK_THROWS_AS(rates_from_probabilities(0.1, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rates_from_probabilities(-0.1, 0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(rates_from_probabilities(0.1, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rates_from_transitions(estimate_transitions(make_trace({1, 1, 1})), 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(rates_from_transitions(estimate_transitions(make_trace({0, 1, 0, 1})), 2.0),
                  std::domain_error);

  for (double rate : {0.0, 1e-4, 0.05, 0.7}) {
    const double p = transition_probability(rate, 2.0);
    CHECK(rates_from_probabilities(p, p, 2.0).mu == doctest::Approx(rate).epsilon(1e-12));
  }
}

TEST_CASE("life distances") {
  const LifeDistances d = life_distance_expectations({0.01, 0.05});
  CHECK(d.los_m == doctest::Approx(20.0));
  CHECK(d.nlos_m == doctest::Approx(100.0));
  const LifeDistances same = life_distance_expectations({0.03, 0.03});
  CHECK(same.los_m == same.nlos_m);
  const LifeDistances zero = life_distance_expectations({0.0, 0.0});
  CHECK(std::isinf(zero.los_m));
  CHECK(std::isinf(zero.nlos_m));

  // Small-probability approximation delta_d / p10.
  for (double p10 : {0.001, 0.01, 0.0195}) {
    const MarkovRates r = rates_from_probabilities(0.1, p10, 2.0);
    CHECK(std::fabs((2.0 / p10) * r.lambda - 1.0) < 0.01);
  }
}

TEST_CASE("life time integrals") {
  const MarkovRates r{0.01, 0.05}; // E[d_LOS] = 20 m
  CHECK(expected_life_time(r, [](double d) { return d / 10.0; }) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(expected_life_time({0.01, 1.0}, [](double d) { return d * d; }) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(expected_life_time(r, [](double) { return 0.0; }) == 0.0);
  CHECK_THROWS_AS(expected_life_time(r, [](double d) { return std::exp(d); }),
                  std::domain_error);
  CHECK_THROWS_AS(expected_life_time({0.01, 0.0}, [](double d) { return d; }),
                  std::domain_error);
}

TEST_CASE("censored run lengths") {
  CHECK(run_lengths(make_trace({1, 1, 1}), LinkState::los).empty());
  CHECK(run_lengths(make_trace({0, 1, 1, 0}), LinkState::los) == std::vector<double>{4.0});
  CHECK(run_lengths(make_trace({0, 1, 0, 1, 1, 1, 0}), LinkState::los) ==
        std::vector<double>{2.0, 6.0});
  CHECK(run_lengths(make_trace({0, 1, 0, 1, 1, 1, 0}), LinkState::nlos) ==
        std::vector<double>{2.0});
}

TEST_CASE("exponential fit") {
  const std::vector<double> same(7, 12.5);
  CHECK(fit_exponential(same).rate == doctest::Approx(1.0 / 12.5));
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{3.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{3.0, -1.0}), std::invalid_argument);

  Rng rng(1234);
  std::vector<double> draws(100000);
  for (double& d : draws) d = -std::log1p(-rng.uniform()) / 0.05;
  const ExponentialFit fit = fit_exponential(draws);
  CHECK(std::fabs(fit.rate / 0.05 - 1.0) < 0.02);
  CHECK(fit.ks_statistic < 0.01);
  CHECK(fit.n == draws.size());

  // Continuous KS on lattice data sees the steps; the lattice KS does not.
  std::vector<double> lattice(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) lattice[i] = 2.0 * std::ceil(draws[i] / 2.0);
  const ExponentialFit lat = fit_exponential(lattice, 2.0);
  CHECK(std::fabs(lat.rate / 0.05 - 1.0) < 0.02);
  CHECK(lat.ks_statistic < 0.01);
  CHECK(fit_exponential(lattice).ks_statistic > lat.ks_statistic);
}

TEST_CASE("two-state simulation") {
  const StateTrace still = simulate_two_state({0, 0}, 2.0, 1000, LinkState::los, 5);
  for (LinkState s : still.states) REQUIRE(s == LinkState::los);
  CHECK(still.states.size() == 1000);

  const StateTrace a = simulate_two_state({0.05, 0.02}, 2.0, 5000, LinkState::nlos, 9);
  const StateTrace b = simulate_two_state({0.05, 0.02}, 2.0, 5000, LinkState::nlos, 9);
  CHECK(a.states == b.states);

  // One standard error at 5e4 steps is about 2.7%, so look across seeds.
  int within = 0;
  double mu_sum = 0.0, lambda_sum = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const StateTrace t = simulate_two_state({0.05, 0.02}, 2.0, 50000, LinkState::nlos, 500 + s);
    const MarkovRates r = rates_from_transitions(estimate_transitions(t), 2.0);
    within += std::fabs(r.mu / 0.05 - 1.0) < 0.05 && std::fabs(r.lambda / 0.02 - 1.0) < 0.05;
    mu_sum += r.mu;
    lambda_sum += r.lambda;
  }
  CHECK(within >= 0.7 * seeds);
  CHECK(std::fabs(mu_sum / seeds / 0.05 - 1.0) < 0.01);
  CHECK(std::fabs(lambda_sum / seeds / 0.02 - 1.0) < 0.01);

  const StateTrace longer = simulate_two_state({0.05, 0.02}, 2.0, 1000000, LinkState::nlos, 18);
  const double los = static_cast<double>(
      std::count(longer.states.begin(), longer.states.end(), LinkState::los));
  CHECK(std::fabs(los / longer.states.size() / (0.05 / 0.07) - 1.0) < 0.02);

  const std::vector<double> runs = run_lengths(longer, LinkState::los);
  const double mean = std::accumulate(runs.begin(), runs.end(), 0.0) / runs.size();
  CHECK(std::fabs(mean * 0.02 - 1.0) < 0.05);
}

TEST_CASE("estimator error shrinks with trace length") {
  double short_err = 0.0, long_err = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    short_err += recovery_error(1000, 100 + s);
    long_err += recovery_error(100000, 200 + s);
  }
  CHECK(long_err < short_err / 3.0);
}

TEST_CASE("rates do not depend on the sampling pitch") {
  const double length = 4.0e6;
  const StateTrace fine = sample_continuous(0.05, 0.02, length, 1.0, 21);
  const StateTrace coarse = sample_continuous(0.05, 0.02, length, 4.0, 21);
  const MarkovRates rf = rates_from_transitions(estimate_transitions(fine), 1.0);
  const MarkovRates rc = rates_from_transitions(estimate_transitions(coarse), 4.0);
  CHECK(std::fabs(rf.mu / rc.mu - 1.0) < 0.10);
  CHECK(std::fabs(rf.lambda / rc.lambda - 1.0) < 0.10);
}
