#pragma once

// Monte Carlo harness tying synthetic scenes and the LOS engine to the
// analytic and Markov models.

#include <cstdint>
#include <span>
#include <vector>

#include "uavlos/analytic.hpp"
#include "uavlos/los_engine.hpp"
#include "uavlos/markov.hpp"
#include "uavlos/random.hpp"
#include "uavlos/scene.hpp"

namespace uavlos {

struct SweepConfig {
  ItuParams params;
  std::vector<double> tx_heights{10, 15, 20, 25, 30, 50};
  std::vector<double> rx_heights{2, 10, 20, 30, 40, 50};
  std::size_t n_samples = 100000; // links per scene
  std::size_t n_scenes = 10;
  double delta_d = 2.0;
  std::uint64_t seed = 1;
  MomentMode moments = MomentMode::paper;
  unsigned workers = 0; // 0: hardware concurrency

  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
};

struct PointPair {
  Point2 a;
  Point2 b;
  double distance = 0.0;
};

PointPair sample_uniform_pair(double patch_side_m, Rng& rng);

/// Scene `k` of a sweep; seeded from (config seed, k).
UrbanScene sweep_scene(const SweepConfig& config, std::size_t k);
std::vector<UrbanScene> sweep_scenes(const SweepConfig& config);

struct McEstimate {
  double estimate = 0.0;
  double ci95 = 0.0; // binomial 95% half-width
  std::uint64_t los = 0;
  std::uint64_t total = 0;
};

/// Fraction of LOS links between UAVs at heights h1 and h2, pooled over
/// n_samples links in each scene. UAV positions are uniform over the free
/// airspace at their height: a draw inside a building prism is redrawn.
McEstimate estimate_avg_plos_mc(const SweepConfig& config, double h1,
                                double h2);

/// Same estimator on caller-provided scenes. `stream` separates random
/// substreams of independent estimates sharing one seed.
McEstimate estimate_avg_plos_mc(std::span<const UrbanScene> scenes,
                                std::size_t n_samples, double h1, double h2,
                                std::uint64_t seed, std::uint64_t stream = 0,
                                unsigned workers = 0);

struct TracePoint {
  std::size_t step = 0; // serpentine grid index; gaps mark skipped points
  double x = 0.0;
  double y = 0.0;
  LinkState state = LinkState::nlos;
};

/// LOS states seen by a receiver sweeping the patch on a serpentine grid.
struct PathTrace {
  double delta_d = 0.0;
  Point3 tx;
  double rx_h = 0.0;
  std::vector<TracePoint> points;

  /// Maximal runs of consecutive grid steps, each as a StateTrace. Single
  /// points are dropped.
  std::vector<StateTrace> segments() const;
};

/// Receiver at height `rx_h` visits a boustrophedon grid of pitch delta_d
/// covering the patch, skipping points inside building prisms. Throws
/// std::invalid_argument if delta_d exceeds the patch side.
PathTrace trace_path(const UrbanScene& scene, const Point3& tx, double rx_h,
                     double delta_d);

/// Patch centre and (A/2 +- A/4, A/2 +- A/4), each moved to the nearest
/// free point when it falls inside a building prism at height h.
std::vector<Point3> tx_positions(const UrbanScene& scene, double h);

/// Transition counts and censored run lengths pooled over trace segments.
struct TraceStatistics {
  TransitionCounts counts;
  std::vector<double> los_runs;
  std::vector<double> nlos_runs;

  void add(const PathTrace& trace);
  void merge(const TraceStatistics& other);
};

/// Markov parameters pooled from trace statistics. Undefined rates (a state
/// never left, or left at every step) are NaN.
struct MarkovSummary {
  double tx_h = 0.0;
  double rx_h = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double mean_dlos = 0.0;
  double mean_dnlos = 0.0;
  double ks_los = 0.0; // NaN with fewer than two LOS runs
  double mu_ci95 = 0.0;
  double mean_dlos_ci95 = 0.0;
};

MarkovSummary summarize_markov(const TraceStatistics& stats, double tx_h,
                               double rx_h, double delta_d);

struct SweepRow {
  double tx_h = 0.0;
  double rx_h = 0.0;
  double plos_mc = 0.0;
  double plos_ci95 = 0.0;
  double plos_closed = 0.0;
  double plos_numeric_poly = 0.0;
  double plos_numeric_gauss = 0.0;
  double mu = 0.0;     // NaN when undefined
  double lambda = 0.0; // NaN when undefined
  double mean_dlos = 0.0;
  double mean_dnlos = 0.0;
  double ks_los = 0.0; // NaN with fewer than two LOS runs

  // Not part of the CSV schema.
  double mu_ci95 = 0.0;
  double mean_dlos_ci95 = 0.0;
  TransitionCounts counts;
  std::size_t n_los_runs = 0;
};

/// One row per (tx_h, rx_h): Monte Carlo, closed-form and quadrature average
/// LOS probability, plus Markov parameters pooled from traces of the five
/// transmitter positions in every scene.
std::vector<SweepRow> sweep_heights(const SweepConfig& config);

struct CrossingCheck {
  double length_m = 0.0;
  double empirical_mean = 0.0;
  double predicted = 0.0;
  std::size_t n_links = 0;

  double relative_error() const noexcept;
};

/// Mean count_crossed_buildings over random links of horizontal length
/// `length_m` (uniform start, uniform direction, both ends in the patch)
/// against the expected-count formula.
CrossingCheck validate_building_count(const UrbanScene& scene, double length_m,
                                      std::size_t n_links, Rng& rng);

/// L1 distance between the histogram of normalised pair distances over
/// [0, 1) and the (not renormalised) polynomial density.
double validate_distance_pdf(std::size_t n, std::size_t bins,
                             std::uint64_t seed);

} // namespace uavlos
