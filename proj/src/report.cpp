#include "actseq/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <stdexcept>

namespace actseq {

std::string to_string(sweep_axis axis) {
  switch (axis) {
    case sweep_axis::update_interval: return "update-interval";
    case sweep_axis::mean_delay: return "mean-delay";
    case sweep_axis::mean_stay: return "mean-stay";
  }
  return "?";
}

std::optional<sweep_axis> parse_axis(std::string_view name) {
  if (name == "update-interval") {
    return sweep_axis::update_interval;
  }
  if (name == "mean-delay") {
    return sweep_axis::mean_delay;
  }
  if (name == "mean-stay") {
    return sweep_axis::mean_stay;
  }
  return std::nullopt;
}

namespace {

scenario_params with_axis(scenario_params base, sweep_axis axis, double value) {
  switch (axis) {
    case sweep_axis::update_interval: base.update_interval = value; break;
    case sweep_axis::mean_delay: base.mean_delay = value; break;
    case sweep_axis::mean_stay: base.mean_stay_in = value; break;
  }
  return base;
}

std::string format_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

} // namespace

sweep_result run_sweep(const sweep_config& config) {
  if (config.grid.empty()) {
    throw std::invalid_argument("sweep: empty grid");
  }
  if (config.seeds.empty()) {
    throw std::invalid_argument("sweep: no seeds");
  }
  const constraint_spec constraint = parse_constraint(config.constraint_text);

  sweep_result out;
  out.axis = config.axis;
  out.cells.resize(config.grid.size() * config.seeds.size());

  struct cell_extra {
    std::vector<std::string> violations;
  };
  std::vector<cell_extra> extras(out.cells.size());

  auto run_cell = [&](std::size_t index) {
    std::size_t g = index / config.seeds.size();
    std::size_t s = index % config.seeds.size();
    scenario_params params = with_axis(config.base, config.axis, config.grid[g]);
    params.seed = config.seeds[s];
    run_artifacts run = run_experiment(params, constraint);
    out.cells[index] = sweep_cell{config.grid[g], params.seed, run.result};
    if (config.verify_physical) {
      auto report = physical_oracle(run, constraint);
      for (const auto& v : report.violations) {
        extras[index].violations.push_back(
            to_string(config.axis) + "=" + format_num(config.grid[g]) + " seed=" +
            std::to_string(params.seed) + ": " + v);
      }
    }
  };

  const unsigned workers = std::max(1u, config.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < out.cells.size(); ++i) {
      run_cell(i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= out.cells.size()) {
            return;
          }
          run_cell(i);
        }
      }));
    }
    for (auto& f : pool) {
      f.get();
    }
  }

  for (auto& extra : extras) {
    for (auto& v : extra.violations) {
      out.safety_violations.push_back(std::move(v));
    }
  }

  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    sweep_summary row;
    row.axis_value = config.grid[g];
    row.runs = config.seeds.size();
    double sum = 0.0;
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      sum += out.cells[g * config.seeds.size() + s].result.probability;
    }
    row.mean_probability = sum / static_cast<double>(row.runs);
    double var = 0.0;
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      double d = out.cells[g * config.seeds.size() + s].result.probability -
                 row.mean_probability;
      var += d * d;
    }
    row.std_probability =
        row.runs > 1 ? std::sqrt(var / static_cast<double>(row.runs - 1)) : 0.0;
    out.summary.push_back(row);
  }
  return out;
}

std::string sweep_csv(const sweep_result& result) {
  std::string out = "axis_value,seed,num_oga,num_phy,probability\n";
  for (const auto& cell : result.cells) {
    out += format_num(cell.axis_value);
    out += ',' + std::to_string(cell.seed);
    out += ',' + std::to_string(cell.result.num_oga);
    out += ',' + std::to_string(cell.result.num_phy);
    out += ',' + format_prob(cell.result.probability);
    out += '\n';
  }
  for (const auto& row : result.summary) {
    out += format_num(row.axis_value) + ",mean,,," + format_prob(row.mean_probability) + '\n';
    out += format_num(row.axis_value) + ",std,,," + format_prob(row.std_probability) + '\n';
  }
  return out;
}

std::string sweep_svg(const sweep_result& result) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double xmin = result.summary.front().axis_value;
  double xmax = result.summary.back().axis_value;
  for (const auto& row : result.summary) {
    xmin = std::min(xmin, row.axis_value);
    xmax = std::max(xmax, row.axis_value);
  }
  if (xmax == xmin) {
    xmax = xmin + 1.0;
  }
  auto xpix = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto ypix = [&](double p) { return top + (1.0 - p) * plot_h; };

  std::string svg;
  svg += "<svg xmlns='http://www.w3.org/2000/svg' width='" + format_num(width) +
         "' height='" + format_num(height) + "'>\n";
  svg += "<rect width='100%' height='100%' fill='white'/>\n";
  svg += "<text x='" + format_num(width / 2) +
         "' y='24' text-anchor='middle' font-size='16'>probability of correct "
         "ordering vs " + to_string(result.axis) + "</text>\n";
  // axes
  svg += "<line x1='" + format_num(left) + "' y1='" + format_num(top) + "' x2='" +
         format_num(left) + "' y2='" + format_num(top + plot_h) +
         "' stroke='black'/>\n";
  svg += "<line x1='" + format_num(left) + "' y1='" + format_num(top + plot_h) +
         "' x2='" + format_num(left + plot_w) + "' y2='" + format_num(top + plot_h) +
         "' stroke='black'/>\n";
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg += "<text x='" + format_num(left - 8) + "' y='" + format_num(ypix(p) + 4) +
           "' text-anchor='end' font-size='11'>" + format_prob(p).substr(0, 4) +
           "</text>\n";
    svg += "<line x1='" + format_num(left - 4) + "' y1='" + format_num(ypix(p)) +
           "' x2='" + format_num(left) + "' y2='" + format_num(ypix(p)) +
           "' stroke='black'/>\n";
  }
  svg += "<text x='" + format_num(left + plot_w / 2) + "' y='" +
         format_num(height - 16) + "' text-anchor='middle' font-size='13'>" +
         to_string(result.axis) + " (s)</text>\n";
  svg += "<text x='18' y='" + format_num(top + plot_h / 2) +
         "' text-anchor='middle' font-size='13' transform='rotate(-90 18 " +
         format_num(top + plot_h / 2) + ")'>probability</text>\n";

  std::string points;
  for (const auto& row : result.summary) {
    points += format_num(xpix(row.axis_value)) + ',' +
              format_num(ypix(row.mean_probability)) + ' ';
    svg += "<circle cx='" + format_num(xpix(row.axis_value)) + "' cy='" +
           format_num(ypix(row.mean_probability)) + "' r='3' fill='steelblue'/>\n";
    svg += "<text x='" + format_num(xpix(row.axis_value)) + "' y='" +
           format_num(top + plot_h + 16) + "' text-anchor='middle' font-size='10'>" +
           format_num(row.axis_value) + "</text>\n";
  }
  svg += "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='" +
         points + "'/>\n";
  svg += "</svg>\n";
  return svg;
}

double spearman_rank_correlation(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("spearman: need two sequences of equal length >= 2");
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
        ++j;
      }
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) {
        rank[order[k]] = avg;
      }
      i = j + 1;
    }
    return rank;
  };
  auto rx = ranks(xs);
  auto ry = ranks(ys);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) {
    return 0.0;
  }
  return cov / std::sqrt(vx * vy);
}

} // namespace actseq
