// Copyright (c) 2026 The emics authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMICS__CALIBRATION__CALIBRATION_HPP_
#define EMICS__CALIBRATION__CALIBRATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/run_log.hpp"
#include "emics/error_signal.hpp"
#include "emics/switchers/switchers.hpp"

namespace emics::calibration
{

struct CalibrationConfig
{
  std::vector<double> alpha_grid;
  std::vector<double> threshold_grid;  // m/s
  double match_window{5.0};            // s
  double penalty{30.0};                // s per unmatched proposal
  double lockout_seconds{2.0};
  double e_max{kMaxRawError};

  void validate() const
  {
    const auto check = [](const std::vector<double> & g, const char * name) {
      if (g.empty()) {
        throw std::invalid_argument(std::string{"calibration: "} + name + " is empty");
      }
      if (!std::is_sorted(g.begin(), g.end())) {
        throw std::invalid_argument(std::string{"calibration: "} + name + " is not sorted");
      }
    };
    check(alpha_grid, "alphaGrid");
    check(threshold_grid, "thresholdGrid");
    if (!(match_window > 0.0) || penalty < 0.0) {
      throw std::invalid_argument("calibration: need matchWindow > 0 and penalty >= 0");
    }
  }
};

/// Inclusive arithmetic grid lo, lo + step, ..., hi; points are computed as
/// lo + k * step and rounded to 1e-12 so 0.06 prints and compares as 0.06.
inline std::vector<double> linear_grid(double lo, double hi, double step)
{
  if (!(step > 0.0) || hi < lo) {
    throw std::invalid_argument("linear_grid: need step > 0 and hi >= lo");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12;
  }
  return g;
}

/// Grid used by the acceptance suite and the CLI when no grid is given.
inline CalibrationConfig default_config()
{
  CalibrationConfig c;
  c.alpha_grid = linear_grid(0.02, 0.12, 0.01);
  c.threshold_grid = linear_grid(0.03, 0.10, 0.005);
  return c;
}

/// Re-runs the threshold rule over a recorded run. The EMA restarts from zero,
/// and only the candidate's own proposals trigger the lockout reset.
inline std::vector<double> propose_switches(
  const RunLog & log, double alpha, double threshold, double lockout_seconds = 2.0,
  double e_max = kMaxRawError)
{
  ErrorFilter filter({alpha, e_max, lockout_seconds});
  const ThresholdSwitcherConfig rule{threshold};
  std::vector<double> out;
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const auto & r = log.records[k];
    if (!std::isfinite(r.s_expert) || !std::isfinite(r.executed.linear)) {
      throw MalformedLogError("record " + std::to_string(k) + " lacks finite speed fields");
    }
    const double e = filter.update(raw_error(r.s_expert, r.executed.linear, e_max), r.t);
    // A run stops switching once its final goal is reached.
    const bool finished = log.complete && k + 1 == log.records.size();
    if (!finished && !filter.in_lockout(r.t) && threshold_decide(e, rule)) {
      out.push_back(r.t);
      filter.reset_on_switch(r.t);
    }
  }
  return out;
}

inline std::vector<double> propose_switches(
  const RunLog & log, double alpha, double threshold, const CalibrationConfig & cfg)
{
  return propose_switches(log, alpha, threshold, cfg.lockout_seconds, cfg.e_max);
}

/// Times of the switches the operator made in a run.
inline std::vector<double> operator_switch_times(const RunLog & log)
{
  std::vector<double> out;
  for (const auto & s : log.switches) {
    if (s.initiator == Initiator::Operator) {
      out.push_back(s.t);
    }
  }
  return out;
}

struct Match
{
  double proposed{0.0};
  double actual{0.0};

  bool operator==(const Match &) const = default;
};

struct CostReport
{
  double j{0.0};
  std::vector<Match> matches;      // in proposal order
  int unmatched_count{0};          // proposals with no actual within the window
  int missed_actual_count{0};      // actual switches no proposal was matched to
  double match_window{0.0};
  double penalty{0.0};
};

/// Greedy nearest-neighbour matching: candidate pairs within +-w are taken in
/// order of increasing gap, each proposal and each actual used at most once.
inline CostReport cost(
  const std::vector<double> & proposed, const std::vector<double> & actual,
  const CalibrationConfig & cfg)
{
  struct Pair
  {
    double gap;
    std::size_t p;
    std::size_t a;
  };
  std::vector<Pair> pairs;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < proposed.size(); ++i) {
    while (lo < actual.size() && actual[lo] < proposed[i] - cfg.match_window) {
      ++lo;
    }
    for (std::size_t k = lo; k < actual.size() && actual[k] <= proposed[i] + cfg.match_window; ++k) {
      pairs.push_back({std::abs(proposed[i] - actual[k]), i, k});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair & x, const Pair & y) {
    return x.gap < y.gap;
  });

  std::vector<int> match_of(proposed.size(), -1);
  std::vector<bool> used(actual.size(), false);
  for (const auto & pr : pairs) {
    if (match_of[pr.p] < 0 && !used[pr.a]) {
      match_of[pr.p] = static_cast<int>(pr.a);
      used[pr.a] = true;
    }
  }

  CostReport rep;
  rep.match_window = cfg.match_window;
  rep.penalty = cfg.penalty;
  double sum = 0.0;
  for (std::size_t i = 0; i < proposed.size(); ++i) {
    if (match_of[i] < 0) {
      ++rep.unmatched_count;
      continue;
    }
    const double a = actual[static_cast<std::size_t>(match_of[i])];
    rep.matches.push_back({proposed[i], a});
    sum += std::abs(proposed[i] - a);
  }
  rep.missed_actual_count = static_cast<int>(std::count(used.begin(), used.end(), false));
  rep.j = sum + rep.unmatched_count * cfg.penalty;
  return rep;
}

/// Cost of one parameter pair summed over every log.
inline double total_cost(
  const std::vector<RunLog> & logs, double alpha, double threshold, const CalibrationConfig & cfg)
{
  double total = 0.0;
  for (const auto & log : logs) {
    total += cost(propose_switches(log, alpha, threshold, cfg), operator_switch_times(log), cfg).j;
  }
  return total;
}

struct GridCell
{
  double alpha{0.0};
  double threshold{0.0};
  double total_cost{0.0};
};

struct GridResult
{
  double alpha{0.0};
  double threshold{0.0};
  double total_cost{0.0};
  std::vector<GridCell> cells;  // alpha-major, both ascending
};

/// Exhaustive search. Alpha rows run in parallel; the argmin is taken in grid
/// order, so ties go to the smaller alpha and then the smaller threshold.
inline GridResult grid_search(const std::vector<RunLog> & logs, const CalibrationConfig & cfg)
{
  cfg.validate();
  if (logs.empty()) {
    throw std::invalid_argument("grid_search: no logs");
  }
  std::vector<std::future<std::vector<GridCell>>> rows;
  rows.reserve(cfg.alpha_grid.size());
  for (const double alpha : cfg.alpha_grid) {
    rows.push_back(std::async(std::launch::async, [&, alpha] {
      std::vector<GridCell> row;
      row.reserve(cfg.threshold_grid.size());
      for (const double thr : cfg.threshold_grid) {
        row.push_back({alpha, thr, total_cost(logs, alpha, thr, cfg)});
      }
      return row;
    }));
  }
  GridResult res;
  res.total_cost = std::numeric_limits<double>::infinity();
  for (auto & f : rows) {
    for (const auto & c : f.get()) {
      res.cells.push_back(c);
      if (c.total_cost < res.total_cost) {
        res.alpha = c.alpha;
        res.threshold = c.threshold;
        res.total_cost = c.total_cost;
      }
    }
  }
  return res;
}

inline std::string grid_csv(const GridResult & r)
{
  std::ostringstream os;
  os.precision(12);
  os << "alpha,threshold,totalCost\n";
  for (const auto & c : r.cells) {
    os << c.alpha << ',' << c.threshold << ',' << c.total_cost << '\n';
  }
  return os.str();
}

inline void to_json(nlohmann::json & j, const CostReport & r)
{
  nlohmann::json m = nlohmann::json::array();
  for (const auto & x : r.matches) {
    m.push_back({{"proposed", x.proposed}, {"actual", x.actual}});
  }
  j = nlohmann::json{
    {"j", r.j},
    {"matches", std::move(m)},
    {"unmatchedCount", r.unmatched_count},
    {"missedActualCount", r.missed_actual_count},
    {"matchWindow", r.match_window},
    {"penalty", r.penalty}};
}

inline void to_json(nlohmann::json & j, const GridResult & r)
{
  j = nlohmann::json{{"alpha", r.alpha}, {"threshold", r.threshold}, {"totalCost", r.total_cost}};
}

inline void to_json(nlohmann::json & j, const CalibrationConfig & c)
{
  j = nlohmann::json{
    {"alphaGrid", c.alpha_grid},
    {"thresholdGrid", c.threshold_grid},
    {"matchWindow", c.match_window},
    {"penalty", c.penalty},
    {"lockoutSeconds", c.lockout_seconds},
    {"eMax", c.e_max}};
}

/// Grids are either explicit arrays or {"min","max","step"} ranges.
inline void from_json(const nlohmann::json & j, CalibrationConfig & c)
{
  const auto grid = [](const nlohmann::json & g) {
    if (g.is_array()) {
      return g.get<std::vector<double>>();
    }
    return linear_grid(g.at("min").get<double>(), g.at("max").get<double>(), g.at("step").get<double>());
  };
  const CalibrationConfig d = default_config();
  CalibrationConfig out;
  out.alpha_grid = j.contains("alphaGrid") ? grid(j.at("alphaGrid")) : d.alpha_grid;
  out.threshold_grid = j.contains("thresholdGrid") ? grid(j.at("thresholdGrid")) : d.threshold_grid;
  out.match_window = j.value("matchWindow", d.match_window);
  out.penalty = j.value("penalty", d.penalty);
  out.lockout_seconds = j.value("lockoutSeconds", d.lockout_seconds);
  out.e_max = j.value("eMax", d.e_max);
  out.validate();
  c = std::move(out);
}

}  // namespace emics::calibration

#endif  // EMICS__CALIBRATION__CALIBRATION_HPP_
