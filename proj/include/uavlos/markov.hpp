#pragma once

// Two-state (NLOS/LOS) distance-homogeneous Markov model of link state along
// a flight path.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace uavlos {

enum class LinkState : std::uint8_t { nlos = 0, los = 1 };

/// Link states sampled every `delta_d` metres along a path.
struct StateTrace {
  double delta_d = 0.0;
  std::vector<LinkState> states;

  /// delta_d > 0 and at least two samples; throws std::invalid_argument.
  void validate() const;
};

struct TransitionCounts {
  std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

  std::uint64_t from_nlos() const noexcept { return n00 + n01; }
  std::uint64_t from_los() const noexcept { return n10 + n11; }
  TransitionCounts& operator+=(const TransitionCounts& o) noexcept;
  bool operator==(const TransitionCounts&) const = default;
};

TransitionCounts count_transitions(const StateTrace& trace);

/// Maximum-likelihood one-step transition probabilities. A row whose source
/// state never occurs is undefined and its probabilities are empty.
struct TransitionEstimate {
  TransitionCounts counts;

  std::uint64_t n0() const noexcept { return counts.from_nlos(); }
  std::uint64_t n1() const noexcept { return counts.from_los(); }
  std::optional<double> p01() const noexcept;
  std::optional<double> p00() const noexcept;
  std::optional<double> p10() const noexcept;
  std::optional<double> p11() const noexcept;
};

TransitionEstimate estimate_transitions(const StateTrace& trace);

/// Per-metre transition rates: mu (NLOS -> LOS) and lambda (LOS -> NLOS).
struct MarkovRates {
  double mu = 0.0;
  double lambda = 0.0;
};

/// Probability of at least one switch within `delta_d` at the given rate.
double transition_probability(double rate, double delta_d) noexcept;

/// mu = -ln(1 - p01) / delta_d, lambda = -ln(1 - p10) / delta_d.
/// Throws std::domain_error if either probability is 1 (the sampling step is
/// too coarse to resolve the rate) and std::invalid_argument for
/// probabilities outside [0, 1] or delta_d <= 0.
MarkovRates rates_from_probabilities(double p01, double p10, double delta_d);

/// As above; an undefined row is a std::domain_error.
MarkovRates rates_from_transitions(const TransitionEstimate& est,
                                   double delta_d);

struct LifeDistances {
  double los_m = 0.0;  ///< 1 / lambda
  double nlos_m = 0.0; ///< 1 / mu
};

/// Zero rates map to infinite expectations.
LifeDistances life_distance_expectations(const MarkovRates& rates) noexcept;

/// Mean LOS life time: integral over x >= 0 of f(x E[d_LOS]) e^-x, where f
/// maps travelled distance to elapsed time. Throws std::domain_error when the
/// integral diverges or lambda is zero.
double expected_life_time(const MarkovRates& rates,
                          const std::function<double(double)>& distance_to_time);

/// Lengths (metres) of maximal runs of `state`. The first and last runs of
/// the trace are censored by its ends and never reported.
std::vector<double> run_lengths(const StateTrace& trace, LinkState state);

struct ExponentialFit {
  double rate = 0.0;         ///< per metre
  double ks_statistic = 0.0; ///< sup |F_emp - F_fit|
  std::size_t n = 0;
};

/// Exponential fit of run lengths plus its Kolmogorov-Smirnov distance.
///
/// With `lattice_step == 0` the runs are treated as continuous: rate =
/// 1 / mean and the usual one-sample KS statistic. With a positive step the
/// runs are read as multiples k * step of an exponential length rounded up to
/// the sampling lattice (geometric in k); the rate is the matching maximum
/// likelihood value -ln(1 - 1/mean(k)) / step and the KS distance compares
/// CDFs on the lattice.
///
/// Throws std::invalid_argument for fewer than two runs or non-positive
/// lengths.
ExponentialFit fit_exponential(std::span<const double> runs,
                               double lattice_step = 0.0);

/// Samples the chain: `n_steps` states, each step switching with probability
/// transition_probability(rate, delta_d). Deterministic for a fixed seed.
StateTrace simulate_two_state(const MarkovRates& rates, double delta_d,
                              std::size_t n_steps, LinkState initial,
                              std::uint64_t seed);

} // namespace uavlos
