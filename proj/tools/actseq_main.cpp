// Command-line front end: run one experiment, sweep a parameter axis,
// replay a recorded trace through the checker, or run the randomized
// self-check against the brute-force oracle.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "actseq/harness.hpp"
#include "actseq/report.hpp"
#include "actseq/selfcheck.hpp"
#include "actseq/trace.hpp"

namespace {

using nlohmann::json;

constexpr int exit_config_error = 2;

std::string default_out_dir() {
  const char* env = std::getenv("ACTSEQ_OUT");
  return env && *env ? env : ".";
}

struct common_options {
  actseq::scenario_params params;
  std::string constraint_text = actseq::smart_lock_constraint;
  std::string delay_kind_name = "exponential";
  std::string out_dir = default_out_dir();

  void attach(CLI::App& cmd) {
    cmd.add_option("--constraint", constraint_text,
                   "ordering constraint, e.g. \"AND(1,2) < AND(3,4)\"");
    cmd.add_option("--lifetime", params.lifetime, "application lifetime in seconds");
    cmd.add_option("--mean-stay-in", params.mean_stay_in,
                   "mean office stay in seconds");
    cmd.add_option("--mean-stay-out", params.mean_stay_out,
                   "mean corridor stay in seconds");
    cmd.add_option("--update-interval", params.update_interval,
                   "sensor dissemination period in seconds");
    cmd.add_option("--mean-delay", params.mean_delay,
                   "mean message delay in seconds");
    cmd.add_option("--delay-kind", delay_kind_name,
                   "message delay distribution: exponential or constant")
        ->check(CLI::IsMember({"exponential", "constant"}));
    cmd.add_option("--out", out_dir, "output directory (default $ACTSEQ_OUT or .)");
  }

  bool finish() {
    params.delay = delay_kind_name == "constant" ? actseq::delay_kind::constant
                                                 : actseq::delay_kind::exponential;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create output directory '" << out_dir
                << "': " << ec.message() << "\n";
      return false;
    }
    return true;
  }
};

json params_json(const actseq::scenario_params& p, const std::string& constraint) {
  return json{{"constraint", constraint},
              {"lifetime", p.lifetime},
              {"mean_stay_in", p.mean_stay_in},
              {"mean_stay_out", p.mean_stay_out},
              {"update_interval", p.update_interval},
              {"mean_delay", p.mean_delay},
              {"delay_kind",
               p.delay == actseq::delay_kind::constant ? "constant" : "exponential"},
              {"seed", p.seed}};
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (!piece.empty()) {
      out.push_back(std::stod(piece));
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (!piece.empty()) {
      out.push_back(std::stoull(piece));
    }
  }
  return out;
}

int cmd_run(common_options& opts, const std::string& trace_path) {
  actseq::constraint_spec constraint = actseq::parse_constraint(opts.constraint_text);
  actseq::run_artifacts run = actseq::run_experiment(opts.params, constraint);

  std::printf("num_oga=%llu num_phy=%llu probability=%.6f\n",
              static_cast<unsigned long long>(run.result.num_oga),
              static_cast<unsigned long long>(run.result.num_phy),
              run.result.probability);
  if (run.result.num_phy == 0) {
    std::printf("note: no complete cycles within the lifetime; probability "
                "reported as 0\n");
  }

  json record = params_json(opts.params, opts.constraint_text);
  record["num_oga"] = run.result.num_oga;
  record["num_phy"] = run.result.num_phy;
  record["probability"] = run.result.probability;
  record["messages_sent"] = run.result.messages_sent;
  record["events_dropped"] = run.result.events_dropped;
  record["detections_per_ga"] = run.result.detections_per_ga;

  std::string json_path = opts.out_dir + "/result.json";
  if (!write_file(json_path, record.dump(2) + "\n")) {
    return 1;
  }
  if (!trace_path.empty() &&
      !write_file(trace_path, actseq::render_trace(run.trace))) {
    return 1;
  }
  return 0;
}

int cmd_sweep(common_options& opts, const std::string& axis_name,
              const std::string& grid_text, const std::string& seeds_text,
              unsigned workers) {
  auto axis = actseq::parse_axis(axis_name);
  if (!axis) {
    std::cerr << "error: unknown axis '" << axis_name
              << "' (expected update-interval, mean-delay, or mean-stay)\n";
    return exit_config_error;
  }
  actseq::sweep_config config;
  config.axis = *axis;
  config.grid = parse_double_list(grid_text);
  config.seeds = parse_seed_list(seeds_text);
  config.base = opts.params;
  config.constraint_text = opts.constraint_text;
  config.workers = workers;
  if (config.grid.empty()) {
    std::cerr << "error: empty sweep grid\n";
    return exit_config_error;
  }
  if (config.seeds.empty()) {
    std::cerr << "error: empty seed list\n";
    return exit_config_error;
  }
  actseq::parse_constraint(config.constraint_text); // surface errors as exit 2

  actseq::sweep_result result = actseq::run_sweep(config);

  std::string stem = opts.out_dir + "/sweep_" + actseq::to_string(*axis);
  if (!write_file(stem + ".csv", actseq::sweep_csv(result)) ||
      !write_file(stem + ".svg", actseq::sweep_svg(result))) {
    return 1;
  }
  for (const auto& row : result.summary) {
    std::printf("%s=%g mean_probability=%.4f std=%.4f (n=%zu)\n",
                actseq::to_string(*axis).c_str(), row.axis_value,
                row.mean_probability, row.std_probability, row.runs);
  }
  if (!result.safety_violations.empty()) {
    for (const auto& v : result.safety_violations) {
      std::cerr << "safety violation: " << v << "\n";
    }
    return 1;
  }
  std::printf("wrote %s.csv and %s.svg\n", stem.c_str(), stem.c_str());
  return 0;
}

int cmd_check_trace(common_options& opts, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open trace '" << path << "'\n";
    return exit_config_error;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  actseq::constraint_spec constraint = actseq::parse_constraint(opts.constraint_text);
  std::vector<actseq::message> messages = actseq::parse_trace(buffer.str());

  actseq::checker chk(constraint);
  std::vector<std::vector<actseq::ga_occurrence>> per_ga(constraint.size());
  std::vector<actseq::satisfaction_event> satisfactions;
  for (const auto& msg : messages) {
    if (msg.is_control()) {
      continue; // control messages carry no information for replay
    }
    auto res = chk.ingest(msg.from, msg.checking());
    for (auto& d : res.detections) {
      per_ga[d.ga_id - 1].push_back(std::move(d));
    }
    for (auto& s : res.satisfactions) {
      satisfactions.push_back(std::move(s));
    }
  }

  for (std::size_t k = 0; k < per_ga.size(); ++k) {
    const auto& ga = constraint.activities()[k];
    std::printf("GA%zu %s: %zu occurrence(s)\n", k + 1,
                ga.kind == actseq::ga_kind::all_of ? "AND" : "OR",
                per_ga[k].size());
    for (std::size_t i = 0; i < per_ga[k].size(); ++i) {
      const auto& occ = per_ga[k][i];
      std::string line = "  #" + std::to_string(i + 1) + " intervals";
      for (const auto& iv : occ.intervals) {
        line += " P" + std::to_string(iv.owner) + "#" + std::to_string(iv.seq);
      }
      line += " lo={";
      for (const auto& c : occ.que_lo) {
        line += actseq::to_string(c);
      }
      line += "} hi={";
      for (const auto& c : occ.que_hi) {
        line += actseq::to_string(c);
      }
      line += "}";
      std::printf("%s\n", line.c_str());
    }
  }
  std::printf("satisfactions=%zu\n", satisfactions.size());
  for (std::size_t i = 0; i < satisfactions.size(); ++i) {
    std::string line = "  sequence " + std::to_string(i + 1) + ":";
    for (const auto& occ : satisfactions[i].chain) {
      line += " ga" + std::to_string(occ.ga_id) + "{";
      for (const auto& iv : occ.intervals) {
        line += "P" + std::to_string(iv.owner) + "#" + std::to_string(iv.seq) + " ";
      }
      line += "}";
    }
    std::printf("%s\n", line.c_str());
  }
  if (chk.pending_reorders() > 0) {
    std::fprintf(stderr,
                 "warning: %zu checking message(s) still waiting for a "
                 "sequence gap to fill\n",
                 chk.pending_reorders());
  }
  return 0;
}

int cmd_selftest(std::uint64_t seed, std::size_t trials) {
  actseq::micro_trial_config config;
  config.seed = seed;
  config.trials = trials;
  auto result = actseq::run_micro_suite(config);
  std::printf("selftest: %zu trials, %zu failure(s)\n", result.trials,
              result.failures);
  for (const auto& d : result.details) {
    std::printf("  %s\n", d.c_str());
  }
  return result.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordering checks for global context activities over "
               "asynchronous message passing"};
  app.require_subcommand(1);

  common_options run_opts;
  std::string run_trace_path;
  auto* run_cmd = app.add_subcommand("run", "run one smart-lock experiment");
  run_opts.attach(*run_cmd);
  run_cmd->add_option("--seed", run_opts.params.seed, "random seed");
  run_cmd->add_option("--trace", run_trace_path, "also write the message trace here");

  common_options sweep_opts;
  std::string axis_name = "update-interval";
  std::string grid_text = "1,60,600,1200,5400";
  std::string seeds_text = "1,2,3,4,5,6,7,8,9,10";
  unsigned workers = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter axis");
  sweep_opts.attach(*sweep_cmd);
  sweep_cmd->add_option("--axis", axis_name,
                        "update-interval, mean-delay, or mean-stay");
  sweep_cmd->add_option("--grid", grid_text, "comma-separated axis values");
  sweep_cmd->add_option("--seeds", seeds_text, "comma-separated seeds");
  sweep_cmd->add_option("--workers", workers, "parallel workers");

  common_options trace_opts;
  std::string trace_in;
  auto* trace_cmd =
      app.add_subcommand("check-trace", "replay a recorded trace through the checker");
  trace_opts.attach(*trace_cmd);
  trace_cmd->add_option("trace", trace_in, "trace file")->required();

  std::uint64_t selftest_seed = 1;
  std::size_t selftest_trials = 200;
  auto* selftest_cmd = app.add_subcommand(
      "selftest", "randomized equivalence check against the brute-force oracle");
  selftest_cmd->add_option("--seed", selftest_seed, "suite seed");
  selftest_cmd->add_option("--trials", selftest_trials, "number of micro traces");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (!run_opts.finish()) {
        return exit_config_error;
      }
      return cmd_run(run_opts, run_trace_path);
    }
    if (sweep_cmd->parsed()) {
      if (!sweep_opts.finish()) {
        return exit_config_error;
      }
      return cmd_sweep(sweep_opts, axis_name, grid_text, seeds_text, workers);
    }
    if (trace_cmd->parsed()) {
      return cmd_check_trace(trace_opts, trace_in);
    }
    if (selftest_cmd->parsed()) {
      return cmd_selftest(selftest_seed, selftest_trials);
    }
  } catch (const actseq::constraint_error& e) {
    std::cerr << "constraint error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const actseq::trace_error& e) {
    std::cerr << "trace error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config_error;
  }
  return 0;
}
