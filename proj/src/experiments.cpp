#include "uavlos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace uavlos {
namespace {

constexpr std::uint64_t kSceneStream = 0x5ce7e;
constexpr std::uint64_t kMcStream = 0x3c0;
constexpr std::uint64_t kPdfStream = 0xd15;
constexpr std::size_t kChunk = 4096;
constexpr double kZ95 = 1.959963984540054;
constexpr double kNudge = 0.5; // metres past the footprint edge
constexpr int kMaxRedraws = 100000;

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// the outcome does not depend on scheduling.
template <class Fn> void parallel_for(std::size_t n, unsigned workers, Fn fn) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

Point2 sample_free_point(const OccluderSet& occluders, double side, double h,
                         Rng& rng) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const Point2 p{rng.uniform(0.0, side), rng.uniform(0.0, side)};
    if (!occluders.is_inside(p.x, p.y, h)) return p;
  }
  throw std::runtime_error("no free airspace found at the requested height");
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

void SweepConfig::validate() const {
  params.validate();
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (n_scenes < 1) throw std::invalid_argument("n_scenes must be >= 1");
  if (!(delta_d > 0.0)) throw std::invalid_argument("delta_d_m must be > 0");
  if (tx_heights.empty() || rx_heights.empty()) {
    throw std::invalid_argument("height lists must not be empty");
  }
  for (double h : tx_heights) {
    if (!(h >= 0.0)) throw std::invalid_argument("tx_heights_m must be >= 0");
  }
  for (double h : rx_heights) {
    if (!(h >= 0.0)) throw std::invalid_argument("rx_heights_m must be >= 0");
  }
}

PointPair sample_uniform_pair(double patch_side_m, Rng& rng) {
  PointPair p;
  p.a = {rng.uniform(0.0, patch_side_m), rng.uniform(0.0, patch_side_m)};
  p.b = {rng.uniform(0.0, patch_side_m), rng.uniform(0.0, patch_side_m)};
  p.distance = std::hypot(p.b.x - p.a.x, p.b.y - p.a.y);
  return p;
}

UrbanScene sweep_scene(const SweepConfig& config, std::size_t k) {
  return generate_scene(config.params,
                        substream_seed(config.seed, kSceneStream, k));
}

std::vector<UrbanScene> sweep_scenes(const SweepConfig& config) {
  std::vector<UrbanScene> scenes;
  scenes.reserve(config.n_scenes);
  for (std::size_t k = 0; k < config.n_scenes; ++k) {
    scenes.push_back(sweep_scene(config, k));
  }
  return scenes;
}

McEstimate estimate_avg_plos_mc(const SweepConfig& config, double h1,
                                double h2) {
  config.validate();
  const auto scenes = sweep_scenes(config);
  return estimate_avg_plos_mc(scenes, config.n_samples, h1, h2, config.seed, 0,
                              config.workers);
}

McEstimate estimate_avg_plos_mc(std::span<const UrbanScene> scenes,
                                std::size_t n_samples, double h1, double h2,
                                std::uint64_t seed, std::uint64_t stream,
                                unsigned workers) {
  if (scenes.empty() || n_samples == 0) {
    throw std::invalid_argument("need at least one scene and one sample");
  }
  if (!(h1 >= 0.0 && h2 >= 0.0)) {
    throw std::invalid_argument("UAV heights must be nonnegative");
  }
  const double floor_h = std::min(h1, h2);
  std::vector<OccluderSet> occluders;
  occluders.reserve(scenes.size());
  for (const UrbanScene& s : scenes) occluders.emplace_back(s, floor_h);

  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> los(scenes.size() * chunks, 0);
  parallel_for(los.size(), workers, [&](std::size_t unit) {
    const std::size_t s = unit / chunks;
    const std::size_t c = unit % chunks;
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(n_samples, begin + kChunk);
    const double side = scenes[s].patch_side();
    Rng rng(substream_seed(seed, mix64(kMcStream + stream), s, c));
    std::uint64_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const Point2 a = sample_free_point(occluders[s], side, h1, rng);
      const Point2 b = sample_free_point(occluders[s], side, h2, rng);
      hits += occluders[s].is_los(Link{a.x, a.y, h1, b.x, b.y, h2}) ? 1 : 0;
    }
    los[unit] = hits;
  });

  McEstimate est;
  for (std::uint64_t v : los) est.los += v;
  est.total = static_cast<std::uint64_t>(n_samples) * scenes.size();
  const double n = static_cast<double>(est.total);
  est.estimate = static_cast<double>(est.los) / n;
  est.ci95 = kZ95 * std::sqrt(est.estimate * (1.0 - est.estimate) / n);
  return est;
}

std::vector<StateTrace> PathTrace::segments() const {
  std::vector<StateTrace> out;
  StateTrace current{delta_d, {}};
  auto flush = [&] {
    if (current.states.size() >= 2) out.push_back(std::move(current));
    current = StateTrace{delta_d, {}};
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].step != points[i - 1].step + 1) flush();
    current.states.push_back(points[i].state);
  }
  flush();
  return out;
}

PathTrace trace_path(const UrbanScene& scene, const Point3& tx, double rx_h,
                     double delta_d) {
  const double side = scene.patch_side();
  if (!(delta_d > 0.0) || delta_d > side) {
    throw std::invalid_argument("delta_d must lie in (0, patch side]");
  }
  if (!(rx_h >= 0.0 && tx.h >= 0.0)) {
    throw std::invalid_argument("UAV heights must be nonnegative");
  }
  const auto n = static_cast<std::size_t>(std::floor(side / delta_d + 1e-9));
  const double offset = 0.5 * (side - static_cast<double>(n - 1) * delta_d);
  const OccluderSet occluders(scene, std::min(tx.h, rx_h));

  PathTrace trace;
  trace.delta_d = delta_d;
  trace.tx = tx;
  trace.rx_h = rx_h;
  for (std::size_t row = 0; row < n; ++row) {
    const double y = offset + static_cast<double>(row) * delta_d;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t col = (row % 2 == 0) ? i : n - 1 - i;
      const double x = offset + static_cast<double>(col) * delta_d;
      if (occluders.is_inside(x, y, rx_h)) continue;
      const bool los = occluders.is_los(Link{tx.x, tx.y, tx.h, x, y, rx_h});
      trace.points.push_back(
          {row * n + i, x, y, los ? LinkState::los : LinkState::nlos});
    }
  }
  return trace;
}

std::vector<Point3> tx_positions(const UrbanScene& scene, double h) {
  const double a = scene.patch_side();
  const std::vector<Point2> nominal{{0.5 * a, 0.5 * a},
                                    {0.25 * a, 0.25 * a},
                                    {0.75 * a, 0.25 * a},
                                    {0.25 * a, 0.75 * a},
                                    {0.75 * a, 0.75 * a}};
  auto free = [&](double x, double y) {
    return x >= 0.0 && y >= 0.0 && x <= a && y <= a &&
           !is_inside_building(scene, x, y, h);
  };
  std::vector<Point3> out;
  for (const Point2& p : nominal) {
    Point2 q = p;
    if (!free(q.x, q.y)) {
      const Building* host = nullptr;
      for (const Building& b : scene.buildings()) {
        if (b.height >= h && q.x >= b.x_lo() && q.x <= b.x_hi() &&
            q.y >= b.y_lo() && q.y <= b.y_hi()) {
          host = &b;
          break;
        }
      }
      const std::vector<Point2> candidates{{host->x_lo() - kNudge, q.y},
                                           {host->x_hi() + kNudge, q.y},
                                           {q.x, host->y_lo() - kNudge},
                                           {q.x, host->y_hi() + kNudge}};
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& c : candidates) {
        const double d = std::hypot(c.x - p.x, c.y - p.y);
        if (d < best && free(c.x, c.y)) {
          best = d;
          q = c;
        }
      }
      if (!std::isfinite(best)) {
        throw std::runtime_error("could not move transmitter out of building");
      }
    }
    out.push_back({q.x, q.y, h});
  }
  return out;
}

void TraceStatistics::add(const PathTrace& trace) {
  for (const StateTrace& seg : trace.segments()) {
    counts += count_transitions(seg);
    const auto l = run_lengths(seg, LinkState::los);
    const auto nl = run_lengths(seg, LinkState::nlos);
    los_runs.insert(los_runs.end(), l.begin(), l.end());
    nlos_runs.insert(nlos_runs.end(), nl.begin(), nl.end());
  }
}

void TraceStatistics::merge(const TraceStatistics& other) {
  counts += other.counts;
  los_runs.insert(los_runs.end(), other.los_runs.begin(),
                  other.los_runs.end());
  nlos_runs.insert(nlos_runs.end(), other.nlos_runs.begin(),
                   other.nlos_runs.end());
}

namespace {

struct RateWithCi {
  double rate = nan();
  double ci95 = nan();
  double p = nan();
};

RateWithCi rate_estimate(std::uint64_t switches, std::uint64_t sources,
                         double delta_d) {
  RateWithCi r;
  if (sources == 0) return r;
  const double n = static_cast<double>(sources);
  r.p = static_cast<double>(switches) / n;
  if (r.p >= 1.0) return r;
  r.rate = -std::log1p(-r.p) / delta_d;
  // Delta method on the binomial standard error of p.
  r.ci95 = kZ95 * std::sqrt(r.p * (1.0 - r.p) / n) / ((1.0 - r.p) * delta_d);
  return r;
}

} // namespace

MarkovSummary summarize_markov(const TraceStatistics& stats, double tx_h,
                               double rx_h, double delta_d) {
  MarkovSummary m;
  m.tx_h = tx_h;
  m.rx_h = rx_h;
  const RateWithCi mu =
      rate_estimate(stats.counts.n01, stats.counts.from_nlos(), delta_d);
  const RateWithCi lambda =
      rate_estimate(stats.counts.n10, stats.counts.from_los(), delta_d);
  m.p01 = mu.p;
  m.p10 = lambda.p;
  m.mu = mu.rate;
  m.mu_ci95 = mu.ci95;
  m.lambda = lambda.rate;
  m.mean_dlos = 1.0 / lambda.rate; // NaN stays NaN; zero rate gives inf
  m.mean_dlos_ci95 = lambda.ci95 / (lambda.rate * lambda.rate);
  m.mean_dnlos = 1.0 / mu.rate;
  m.ks_los = nan();
  if (stats.los_runs.size() >= 2) {
    try {
      m.ks_los = fit_exponential(stats.los_runs, delta_d).ks_statistic;
    } catch (const std::domain_error&) {
    }
  }
  return m;
}

std::vector<SweepRow> sweep_heights(const SweepConfig& config) {
  config.validate();
  const auto scenes = sweep_scenes(config);
  std::vector<SweepRow> rows;
  std::uint64_t cell = 0;
  for (double tx_h : config.tx_heights) {
    std::vector<std::vector<Point3>> transmitters;
    for (const UrbanScene& s : scenes) transmitters.push_back(tx_positions(s, tx_h));
    const std::size_t per_scene = transmitters.front().size();

    for (double rx_h : config.rx_heights) {
      SweepRow row;
      row.tx_h = tx_h;
      row.rx_h = rx_h;
      const HeightPair hp{tx_h, rx_h};
      row.plos_closed = average_p_los_closed(hp, config.params, config.moments);
      row.plos_numeric_poly =
          average_p_los_numeric(hp, config.params, PdfChoice::poly);
      row.plos_numeric_gauss = average_p_los_numeric(
          hp, config.params, PdfChoice::gauss, config.moments);

      const McEstimate mc =
          estimate_avg_plos_mc(scenes, config.n_samples, tx_h, rx_h,
                               config.seed, cell, config.workers);
      row.plos_mc = mc.estimate;
      row.plos_ci95 = mc.ci95;

      std::vector<TraceStatistics> parts(scenes.size() * per_scene);
      parallel_for(parts.size(), config.workers, [&](std::size_t unit) {
        const std::size_t s = unit / per_scene;
        parts[unit].add(trace_path(scenes[s], transmitters[s][unit % per_scene],
                                   rx_h, config.delta_d));
      });
      TraceStatistics stats;
      for (const auto& p : parts) stats.merge(p);

      row.counts = stats.counts;
      row.n_los_runs = stats.los_runs.size();
      const MarkovSummary m = summarize_markov(stats, tx_h, rx_h, config.delta_d);
      row.mu = m.mu;
      row.mu_ci95 = m.mu_ci95;
      row.lambda = m.lambda;
      row.mean_dlos = m.mean_dlos;
      row.mean_dlos_ci95 = m.mean_dlos_ci95;
      row.mean_dnlos = m.mean_dnlos;
      row.ks_los = m.ks_los;
      rows.push_back(row);
      ++cell;
    }
  }
  return rows;
}

double CrossingCheck::relative_error() const noexcept {
  return std::fabs(empirical_mean - predicted) / predicted;
}

CrossingCheck validate_building_count(const UrbanScene& scene, double length_m,
                                      std::size_t n_links, Rng& rng) {
  const double side = scene.patch_side();
  if (!(length_m >= 0.0 && length_m <= side)) {
    throw std::invalid_argument("link length must lie in [0, patch side]");
  }
  if (n_links == 0) throw std::invalid_argument("n_links must be >= 1");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n_links; ++i) {
    for (;;) {
      const double x = rng.uniform(0.0, side);
      const double y = rng.uniform(0.0, side);
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double ex = x + length_m * std::cos(theta);
      const double ey = y + length_m * std::sin(theta);
      if (ex < 0.0 || ey < 0.0 || ex > side || ey > side) continue;
      total += count_crossed_buildings(scene, Link{x, y, 0.0, ex, ey, 0.0});
      break;
    }
  }
  CrossingCheck c;
  c.length_m = length_m;
  c.n_links = n_links;
  c.empirical_mean = static_cast<double>(total) / static_cast<double>(n_links);
  c.predicted = expected_buildings(length_m / 1000.0, scene.params().alpha,
                                   scene.params().beta_per_km2);
  return c;
}

double validate_distance_pdf(std::size_t n, std::size_t bins,
                             std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one sample");
  if (bins == 0) throw std::invalid_argument("need at least one bin");
  Rng rng(substream_seed(seed, kPdfStream));
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = sample_uniform_pair(1.0, rng).distance;
    if (k < 1.0) {
      hist[std::min(bins - 1, static_cast<std::size_t>(k * bins))] += 1;
    }
  }
  auto antiderivative = [](double k) {
    return std::numbers::pi * k * k - 8.0 / 3.0 * k * k * k + 0.5 * k * k * k * k;
  };
  double l1 = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) / static_cast<double>(bins);
    const double hi = static_cast<double>(b + 1) / static_cast<double>(bins);
    const double expected = antiderivative(hi) - antiderivative(lo);
    l1 += std::fabs(static_cast<double>(hist[b]) / static_cast<double>(n) -
                    expected);
  }
  return l1;
}

} // namespace uavlos
