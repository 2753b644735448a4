#pragma once

// CSV schemas for scenes, traces, Markov summaries and sweep results. All
// numbers are written with six significant digits.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uavlos/experiments.hpp"
#include "uavlos/scene.hpp"

namespace uavlos {

/// "%.6g"; NaN and infinities as "nan", "inf", "-inf".
std::string format_number(double v);

/// Splits one CSV line on commas (no quoting is ever emitted).
std::vector<std::string> split_csv_line(const std::string& line);

inline constexpr const char* kSceneHeader =
    "center_x_m,center_y_m,half_side_m,height_m";
inline constexpr const char* kTraceHeader = "step,x_m,y_m,state";
inline constexpr const char* kMarkovHeader =
    "tx_h_m,rx_h_m,p01,p10,mu_per_m,lambda_per_m,mean_dlos_m,mean_dnlos_m,"
    "ks_los";
inline constexpr const char* kSweepHeader =
    "tx_h_m,rx_h_m,plos_mc,plos_ci95,plos_closed,plos_numeric_poly,"
    "plos_numeric_gauss,mu_per_m,lambda_per_m,mean_dlos_m,mean_dnlos_m,ks_los";

void write_scene_csv(std::ostream& out, const UrbanScene& scene);
/// Throws std::runtime_error on malformed input and std::invalid_argument if
/// the buildings violate scene invariants.
UrbanScene read_scene_csv(std::istream& in);

void write_trace_csv(std::ostream& out, const PathTrace& trace);
PathTrace read_trace_csv(std::istream& in);

void write_markov_csv(std::ostream& out, std::span<const MarkovSummary> rows);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

} // namespace uavlos
