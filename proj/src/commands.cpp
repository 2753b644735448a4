#include "uavlos/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "uavlos/csv_io.hpp"
#include "uavlos/simd/kernels.hpp"

#ifndef UAVLOS_VERSION
#define UAVLOS_VERSION "unknown"
#endif

namespace uavlos {
namespace fs = std::filesystem;
namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

void write_metadata(const fs::path& dir, std::string_view verb,
                    const RunConfig& cfg) {
  auto out = open_output(dir / "run_metadata.txt");
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  const SweepConfig& s = cfg.sweep;
  const DistanceMoments paper = distance_moments(MomentMode::paper);
  const DistanceMoments derived = distance_moments(MomentMode::derived);
  out << "# generated_at=" << stamp << '\n'
      << "verb=" << verb << '\n'
      << "code_version=" << UAVLOS_VERSION << '\n'
      << "simd_backend=" << simd::backend_name(simd::active_kernels().backend)
      << '\n'
      << "alpha=" << format_number(s.params.alpha) << '\n'
      << "beta_per_km2=" << format_number(s.params.beta_per_km2) << '\n'
      << "gamma_m=" << format_number(s.params.gamma_m) << '\n'
      << "area_side_m=" << format_number(s.params.patch_side_m) << '\n'
      << "d_correction=" << format_number(s.params.d_correction) << '\n'
      << "delta_d_m=" << format_number(s.delta_d) << '\n'
      << "n_samples=" << s.n_samples << '\n'
      << "n_scenes=" << s.n_scenes << '\n'
      << "seed=" << s.seed << '\n'
      << "tx_heights_m=" << join(s.tx_heights) << '\n'
      << "rx_heights_m=" << join(s.rx_heights) << '\n'
      << "moment_mode=" << to_string(s.moments) << '\n'
      << "pdf_choice=" << to_string(cfg.pdf) << '\n'
      << "paper_moments_over_A=" << format_number(paper.mean) << ','
      << format_number(paper.stddev) << '\n'
      << "derived_moments_over_A=" << format_number(derived.mean) << ','
      << format_number(derived.stddev) << '\n'
      << "trace_ordering=serpentine\n"
      << "mc_endpoints=uniform_free_airspace\n";
}

void gen_scene(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const UrbanScene scene = sweep_scene(cfg.sweep, 0);
  auto out = open_output(dir / "scene.csv");
  write_scene_csv(out, scene);
  log << "scene.csv: " << scene.size() << " buildings, coverage "
      << format_number(scene.coverage_ratio()) << '\n';
}

void plos_analytic(const RunConfig& cfg, const fs::path& dir) {
  auto out = open_output(dir / "plos_analytic.csv");
  out << "tx_h_m,rx_h_m,p_los_single,plos_closed,plos_numeric,gaussian_regime\n";
  for (double tx : cfg.sweep.tx_heights) {
    for (double rx : cfg.sweep.rx_heights) {
      const HeightPair hp{tx, rx};
      const ClosedFormTerms t =
          closed_form_terms(hp, cfg.sweep.params, cfg.moments());
      const double numeric =
          average_p_los_numeric(hp, cfg.sweep.params, cfg.pdf, cfg.moments());
      out << format_number(tx) << ',' << format_number(rx) << ','
          << format_number(t.p_single) << ',' << format_number(t.value) << ','
          << format_number(numeric) << ',' << (t.gaussian_regime ? 1 : 0)
          << '\n';
    }
  }
}

void plos_mc(const RunConfig& cfg, const fs::path& dir) {
  const auto scenes = sweep_scenes(cfg.sweep);
  auto out = open_output(dir / "plos_mc.csv");
  out << "tx_h_m,rx_h_m,plos_mc,plos_ci95\n";
  std::uint64_t cell = 0;
  for (double tx : cfg.sweep.tx_heights) {
    for (double rx : cfg.sweep.rx_heights) {
      const McEstimate e =
          estimate_avg_plos_mc(scenes, cfg.sweep.n_samples, tx, rx,
                               cfg.sweep.seed, cell++, cfg.sweep.workers);
      out << format_number(tx) << ',' << format_number(rx) << ','
          << format_number(e.estimate) << ',' << format_number(e.ci95) << '\n';
    }
  }
}

MarkovSummary summarize_trace(const PathTrace& trace) {
  TraceStatistics stats;
  stats.add(trace);
  return summarize_markov(stats, trace.tx.h, trace.rx_h, trace.delta_d);
}

void trace(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const UrbanScene scene = sweep_scene(cfg.sweep, 0);
  const double tx_h = cfg.sweep.tx_heights.front();
  const double rx_h = cfg.sweep.rx_heights.front();
  const Point3 tx = tx_positions(scene, tx_h).front();
  const PathTrace t = trace_path(scene, tx, rx_h, cfg.sweep.delta_d);
  {
    auto out = open_output(dir / "trace.csv");
    write_trace_csv(out, t);
  }
  const MarkovSummary m = summarize_trace(t);
  auto out = open_output(dir / "markov_summary.csv");
  write_markov_csv(out, std::span(&m, 1));
  log << "trace.csv: " << t.points.size() << " points\n";
}

void fit_markov(const CommandOptions& opt, const fs::path& dir) {
  const fs::path input =
      opt.trace_input.empty() ? dir / "trace.csv" : fs::path(opt.trace_input);
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read " + input.string());
  const PathTrace t = read_trace_csv(in);
  const MarkovSummary m = summarize_trace(t);
  auto out = open_output(dir / "markov_summary.csv");
  write_markov_csv(out, std::span(&m, 1));
}

void sweep(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto rows = sweep_heights(cfg.sweep);
  auto out = open_output(dir / "sweep.csv");
  write_sweep_csv(out, rows);
  log << "sweep.csv: " << rows.size() << " rows\n";
}

void validate(const RunConfig& cfg, const fs::path& dir) {
  auto out = open_output(dir / "validate.csv");
  out << "check,value,reference\n";
  const std::uint64_t seed = cfg.sweep.seed;
  out << "distance_pdf_l1," << format_number(validate_distance_pdf(1000000, 100, seed))
      << ",0.03\n";

  Rng rng(substream_seed(seed, 0xd157));
  double sum = 0.0;
  constexpr int kPairs = 1000000;
  for (int i = 0; i < kPairs; ++i) sum += sample_uniform_pair(1.0, rng).distance;
  out << "mean_distance_over_A," << format_number(sum / kPairs) << ",0.5214\n";

  const UrbanScene scene = sweep_scene(cfg.sweep, 0);
  Rng link_rng(substream_seed(seed, 0xc055));
  for (double l : {100.0, 200.0, 400.0}) {
    if (l > scene.patch_side()) continue;
    const CrossingCheck c = validate_building_count(scene, l, 100000, link_rng);
    out << "crossings_l" << format_number(l) << "m,"
        << format_number(c.empirical_mean) << ',' << format_number(c.predicted)
        << '\n';
  }

  const MarkovRates truth{0.05, 0.02};
  const StateTrace synthetic =
      simulate_two_state(truth, 2.0, 50000, LinkState::nlos, seed);
  const MarkovRates got =
      rates_from_transitions(estimate_transitions(synthetic), 2.0);
  out << "recovered_mu_per_m," << format_number(got.mu) << ','
      << format_number(truth.mu) << '\n'
      << "recovered_lambda_per_m," << format_number(got.lambda) << ','
      << format_number(truth.lambda) << '\n';
}

} // namespace

const std::vector<std::string>& command_verbs() {
  static const std::vector<std::string> verbs{
      "gen-scene", "plos-analytic", "plos-mc", "trace",
      "fit-markov", "sweep",        "validate"};
  return verbs;
}

int run_command(std::string_view verb, const RunConfig& cfg,
                const CommandOptions& options, std::ostream& log,
                std::ostream& err) {
  try {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string());

    if (verb == "gen-scene") {
      gen_scene(cfg, dir, log);
    } else if (verb == "plos-analytic") {
      plos_analytic(cfg, dir);
    } else if (verb == "plos-mc") {
      plos_mc(cfg, dir);
    } else if (verb == "trace") {
      trace(cfg, dir, log);
    } else if (verb == "fit-markov") {
      fit_markov(options, dir);
    } else if (verb == "sweep") {
      sweep(cfg, dir, log);
    } else if (verb == "validate") {
      validate(cfg, dir);
    } else {
      throw std::invalid_argument("unknown verb '" + std::string(verb) + "'");
    }
    write_metadata(dir, verb, cfg);
    return 0;
  } catch (const std::exception& e) {
    err << "uavlos " << verb << ": " << e.what() << '\n';
    return 1;
  }
}

} // namespace uavlos
