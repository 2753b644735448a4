#include "uavlos/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "uavlos/random.hpp"

namespace uavlos {

void StateTrace::validate() const {
  if (!(delta_d > 0.0) || !std::isfinite(delta_d)) {
    throw std::invalid_argument("trace delta_d must be positive");
  }
  if (states.size() < 2) {
    throw std::invalid_argument("trace needs at least two samples");
  }
}

TransitionCounts& TransitionCounts::operator+=(
    const TransitionCounts& o) noexcept {
  n00 += o.n00;
  n01 += o.n01;
  n10 += o.n10;
  n11 += o.n11;
  return *this;
}

TransitionCounts count_transitions(const StateTrace& trace) {
  trace.validate();
  TransitionCounts c;
  for (std::size_t i = 1; i < trace.states.size(); ++i) {
    const bool from_los = trace.states[i - 1] == LinkState::los;
    const bool to_los = trace.states[i] == LinkState::los;
    if (from_los) {
      (to_los ? c.n11 : c.n10) += 1;
    } else {
      (to_los ? c.n01 : c.n00) += 1;
    }
  }
  return c;
}

// The "stay" probability is the complement of the "leave" one so each row
// sums to exactly 1.
std::optional<double> TransitionEstimate::p01() const noexcept {
  if (n0() == 0) return std::nullopt;
  return static_cast<double>(counts.n01) / static_cast<double>(n0());
}
std::optional<double> TransitionEstimate::p00() const noexcept {
  const auto p = p01();
  if (!p) return std::nullopt;
  return 1.0 - *p;
}
std::optional<double> TransitionEstimate::p10() const noexcept {
  if (n1() == 0) return std::nullopt;
  return static_cast<double>(counts.n10) / static_cast<double>(n1());
}
std::optional<double> TransitionEstimate::p11() const noexcept {
  const auto p = p10();
  if (!p) return std::nullopt;
  return 1.0 - *p;
}

TransitionEstimate estimate_transitions(const StateTrace& trace) {
  return {count_transitions(trace)};
}

double transition_probability(double rate, double delta_d) noexcept {
  return -std::expm1(-rate * delta_d);
}

namespace {

double rate_from_probability(double p, double delta_d, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
  if (p == 1.0) {
    throw std::domain_error(std::string(name) +
                            " = 1: rate unbounded at this sampling step");
  }
  return -std::log1p(-p) / delta_d;
}

} // namespace

MarkovRates rates_from_probabilities(double p01, double p10, double delta_d) {
  if (!(delta_d > 0.0)) throw std::invalid_argument("delta_d must be positive");
  return {rate_from_probability(p01, delta_d, "p01"),
          rate_from_probability(p10, delta_d, "p10")};
}

MarkovRates rates_from_transitions(const TransitionEstimate& est,
                                   double delta_d) {
  const auto p01 = est.p01();
  const auto p10 = est.p10();
  if (!p01) throw std::domain_error("NLOS row undefined: state never left");
  if (!p10) throw std::domain_error("LOS row undefined: state never left");
  return rates_from_probabilities(*p01, *p10, delta_d);
}

LifeDistances life_distance_expectations(const MarkovRates& rates) noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {rates.lambda > 0.0 ? 1.0 / rates.lambda : inf,
          rates.mu > 0.0 ? 1.0 / rates.mu : inf};
}

double expected_life_time(
    const MarkovRates& rates,
    const std::function<double(double)>& distance_to_time) {
  const double mean_d = life_distance_expectations(rates).los_m;
  if (!std::isfinite(mean_d)) {
    throw std::domain_error("LOS life distance is infinite (lambda = 0)");
  }
  auto integrand = [&](double x) {
    return distance_to_time(x * mean_d) * std::exp(-x);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = integrator.integrate(integrand, 1e-10, &error, &l1);
  } catch (const std::exception& e) {
    throw std::domain_error(std::string("life-time integral diverges: ") +
                            e.what());
  }
  if (!std::isfinite(value) || !std::isfinite(l1) ||
      error > 1e-6 * std::max(std::fabs(value), 1e-300)) {
    throw std::domain_error("life-time integral diverges");
  }
  return value;
}

std::vector<double> run_lengths(const StateTrace& trace, LinkState state) {
  trace.validate();
  struct Run {
    LinkState state;
    std::size_t length;
  };
  std::vector<Run> runs;
  for (LinkState s : trace.states) {
    if (runs.empty() || runs.back().state != s) {
      runs.push_back({s, 1});
    } else {
      ++runs.back().length;
    }
  }
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
    if (runs[i].state == state) {
      out.push_back(static_cast<double>(runs[i].length) * trace.delta_d);
    }
  }
  return out;
}

ExponentialFit fit_exponential(std::span<const double> runs,
                               double lattice_step) {
  if (runs.size() < 2) {
    throw std::invalid_argument("exponential fit needs at least two runs");
  }
  if (lattice_step < 0.0) {
    throw std::invalid_argument("lattice step must be nonnegative");
  }
  std::vector<double> sorted(runs.begin(), runs.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0.0)) {
    throw std::invalid_argument("run lengths must be positive");
  }
  const double n = static_cast<double>(sorted.size());
  double sum = 0.0;
  for (double r : sorted) sum += r;
  const double mean = sum / n;

  ExponentialFit fit;
  fit.n = sorted.size();
  if (lattice_step == 0.0) {
    fit.rate = 1.0 / mean;
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double cdf = -std::expm1(-fit.rate * sorted[i]);
      const double before = static_cast<double>(i) / n;
      const double after = static_cast<double>(i + 1) / n;
      d = std::max({d, cdf - before, after - cdf});
    }
    fit.ks_statistic = d;
    return fit;
  }

  const double mean_steps = mean / lattice_step;
  if (!(mean_steps > 1.0)) {
    throw std::domain_error("runs are all one lattice step long");
  }
  fit.rate = -std::log1p(-1.0 / mean_steps) / lattice_step;
  auto model_cdf = [&](double k) {
    return -std::expm1(-fit.rate * k * lattice_step);
  };
  // Both CDFs are step functions on the lattice; check each observed value
  // and the lattice point just below it.
  double d = 0.0;
  double emp_below = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double k = std::round(sorted[i] / lattice_step);
    std::size_t j = i;
    while (j < sorted.size() && std::round(sorted[j] / lattice_step) == k) ++j;
    const double emp_at = static_cast<double>(j) / n;
    d = std::max(d, std::fabs(emp_below - model_cdf(k - 1.0)));
    d = std::max(d, std::fabs(emp_at - model_cdf(k)));
    emp_below = emp_at;
    i = j;
  }
  fit.ks_statistic = d;
  return fit;
}

StateTrace simulate_two_state(const MarkovRates& rates, double delta_d,
                              std::size_t n_steps, LinkState initial,
                              std::uint64_t seed) {
  if (!(delta_d > 0.0)) throw std::invalid_argument("delta_d must be positive");
  if (rates.mu < 0.0 || rates.lambda < 0.0) {
    throw std::invalid_argument("rates must be nonnegative");
  }
  const double p01 = transition_probability(rates.mu, delta_d);
  const double p10 = transition_probability(rates.lambda, delta_d);
  Rng rng(substream_seed(seed, 0x7a11));
  StateTrace trace{delta_d, {}};
  trace.states.reserve(n_steps);
  LinkState s = initial;
  for (std::size_t i = 0; i < n_steps; ++i) {
    if (i > 0) {
      const double u = rng.uniform();
      if (s == LinkState::nlos && u < p01) {
        s = LinkState::los;
      } else if (s == LinkState::los && u < p10) {
        s = LinkState::nlos;
      }
    }
    trace.states.push_back(s);
  }
  return trace;
}

} // namespace uavlos
