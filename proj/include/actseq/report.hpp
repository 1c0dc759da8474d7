#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actseq/harness.hpp"

namespace actseq {

inline constexpr const char* smart_lock_constraint = "AND(1,2) < AND(3,4)";

enum class sweep_axis { update_interval, mean_delay, mean_stay };

std::string to_string(sweep_axis axis);
std::optional<sweep_axis> parse_axis(std::string_view name);

struct sweep_config {
  sweep_axis axis = sweep_axis::update_interval;
  std::vector<double> grid;
  std::vector<std::uint64_t> seeds;
  scenario_params base;
  std::string constraint_text = smart_lock_constraint;
  bool verify_physical = true;
  unsigned workers = 1;
};

struct sweep_cell {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  experiment_result result;
};

struct sweep_summary {
  double axis_value = 0.0;
  std::size_t runs = 0;
  double mean_probability = 0.0;
  double std_probability = 0.0;
};

struct sweep_result {
  sweep_axis axis = sweep_axis::update_interval;
  std::vector<sweep_cell> cells; // grid-major, then seed order
  std::vector<sweep_summary> summary;
  std::vector<std::string> safety_violations; // from the physical oracle
};

/// Runs the grid x seeds product. Each run is an isolated simulation, so
/// `workers > 1` fans the cells out across threads; results assemble by
/// index and stay deterministic.
sweep_result run_sweep(const sweep_config& config);

/// Data rows `axis_value,seed,num_oga,num_phy,probability` followed by
/// per-axis aggregate rows whose seed column reads `mean` or `std`.
std::string sweep_csv(const sweep_result& result);

/// Minimal line plot of mean probability vs axis value, labeled axes.
std::string sweep_svg(const sweep_result& result);

/// Spearman rank correlation with average ranks for ties.
double spearman_rank_correlation(const std::vector<double>& xs,
                                 const std::vector<double>& ys);

} // namespace actseq
