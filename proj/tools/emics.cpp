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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emics/calibration/calibration.hpp"
#include "emics/core/run_log.hpp"
#include "emics/core/scenario.hpp"
#include "emics/gateway/live_session.hpp"
#include "emics/gateway/server.hpp"
#include "emics/runner/metrics.hpp"
#include "emics/runner/runner.hpp"

namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + p.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path & p, const std::string & text)
{
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + p.string());
  }
  out << text;
}

emics::sim::RunConfig load_run_config(const std::string & path)
{
  return path.empty() ? emics::sim::RunConfig{} : nlohmann::json::parse(slurp(path)).get<emics::sim::RunConfig>();
}

std::string log_name(const emics::RunLog & log)
{
  return log.scenario_id + "_" + std::string{emics::to_string(log.control_mode)} + "_" + log.profile + "_" +
         std::to_string(log.seed) + ".jsonl";
}

int cmd_run(
  const std::string & scenario_path, const std::string & mode, const std::string & profile,
  const std::vector<std::uint64_t> & seeds, const std::string & out_dir, const std::string & config_path)
{
  const auto scenario = emics::parse_scenario(slurp(scenario_path));
  emics::runner::RunRequest req;
  req.mode = emics::control_mode_from_string(mode);
  req.profile = profile;
  req.config = load_run_config(config_path);
  std::vector<emics::RunLog> logs;
  if (seeds.empty()) {
    logs.push_back(emics::runner::run_scenario(scenario, req));
  } else {
    logs = emics::runner::run_batch(scenario, req, seeds);
  }
  fs::create_directories(out_dir);
  std::cout << emics::runner::metrics_csv_header() << '\n';
  for (const auto & log : logs) {
    spit(fs::path(out_dir) / log_name(log), emics::serialize_log(log));
    std::cout << emics::runner::metrics_csv_row(log, emics::runner::compute_metrics(log)) << '\n';
  }
  return 0;
}

int cmd_metrics(const std::string & log_path, bool csv)
{
  const auto log = emics::parse_log(slurp(log_path));
  const auto m = emics::runner::compute_metrics(log);
  if (csv) {
    std::cout << emics::runner::metrics_csv_header() << '\n' << emics::runner::metrics_csv_row(log, m) << '\n';
  } else {
    std::cout << nlohmann::json(m).dump(2) << '\n';
  }
  return 0;
}

int cmd_calibrate(const std::string & dir, const std::string & config_path, const std::string & out_csv)
{
  emics::calibration::CalibrationConfig cfg = emics::calibration::default_config();
  if (!config_path.empty()) {
    cfg = nlohmann::json::parse(slurp(config_path)).get<emics::calibration::CalibrationConfig>();
  }
  std::vector<fs::path> files;
  for (const auto & e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no .jsonl run logs in " + dir);
  }
  std::vector<emics::RunLog> logs;
  for (const auto & f : files) logs.push_back(emics::parse_log(slurp(f)));
  const auto res = emics::calibration::grid_search(logs, cfg);
  const auto csv = emics::calibration::grid_csv(res);
  if (out_csv.empty()) {
    std::cout << csv;
  } else {
    spit(out_csv, csv);
  }
  nlohmann::json best = res;
  best["logs"] = logs.size();
  std::cerr << best.dump() << '\n';
  return 0;
}

int cmd_replay(const std::string & log_path)
{
  const auto rep = emics::runner::replay_and_compare(slurp(log_path));
  std::cout << (rep.identical ? "identical: " : "MISMATCH: ") << rep.diagnostic << '\n';
  return rep.identical ? 0 : 1;
}

int cmd_serve(
  const std::string & scenario_path, const std::string & mode, unsigned short port, const std::string & initial,
  double realtime, const std::string & out_dir, const std::string & config_path)
{
  const auto scenario = emics::parse_scenario(slurp(scenario_path));
  emics::gateway::LiveSession live(
    scenario, emics::control_mode_from_string(mode), load_run_config(config_path), emics::loa_from_string(initial));
  emics::gateway::GatewayServer server(live, {port, realtime, 32});
  server.start();
  std::cerr << "listening on ws://127.0.0.1:" << server.port() << "/ (" << scenario.id << ", " << mode << ")\n";
  server.wait();
  const auto log = live.log();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    spit(fs::path(out_dir) / log_name(log), emics::serialize_log(log));
  }
  std::cout << emics::runner::metrics_csv_header() << '\n'
            << emics::runner::metrics_csv_row(log, emics::runner::compute_metrics(log)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"emics: control-switching simulator, metrics, calibration and live gateway"};
  app.require_subcommand(1);
  const std::vector<std::string> modes{"teleop", "autonomy", "hi", "ri", "mi"};

  std::string scenario;
  std::string mode;
  std::string profile = "default";
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "logs";
  std::string config;
  auto * run = app.add_subcommand("run", "run one trial (or one per --seed) and write its log");
  run->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "control mode")->required()->check(CLI::IsMember(modes));
  run->add_option("--profile", profile, "operator profile name from the scenario");
  run->add_option("--seed", seeds, "override the scenario seed; repeat for a batch");
  run->add_option("--out", out_dir, "directory for the run log");
  run->add_option("--config", config, "run configuration JSON")->check(CLI::ExistingFile);

  std::string log_path;
  bool csv = false;
  auto * metrics = app.add_subcommand("metrics", "compute metrics of a run log");
  metrics->add_option("--log", log_path, "run log")->required()->check(CLI::ExistingFile);
  metrics->add_flag("--csv", csv, "print the fixed CSV columns instead of JSON");

  std::string logs_dir;
  std::string cal_config;
  std::string cal_out;
  auto * calibrate = app.add_subcommand("calibrate", "grid-search the threshold switcher against operator switches");
  calibrate->add_option("--logs", logs_dir, "directory of run logs")->required()->check(CLI::ExistingDirectory);
  calibrate->add_option("--config", cal_config, "calibration configuration JSON")->check(CLI::ExistingFile);
  calibrate->add_option("--out", cal_out, "CSV output file (default stdout)");

  auto * replay = app.add_subcommand("replay", "re-simulate a log and compare it byte for byte");
  replay->add_option("--log", log_path, "run log")->required()->check(CLI::ExistingFile);

  unsigned short port = 8765;
  std::string initial = "teleoperation";
  double realtime = 1.0;
  std::string serve_out;
  auto * serve = app.add_subcommand("serve", "run a live session behind the WebSocket gateway");
  serve->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  serve->add_option("--mode", mode, "control mode")->required()->check(CLI::IsMember(modes));
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--initial-loa", initial, "starting LOA")->check(CLI::IsMember({"teleoperation", "autonomy"}));
  serve->add_option("--realtime", realtime, "speed-up over wall clock");
  serve->add_option("--out", serve_out, "directory for the session log");
  serve->add_option("--config", config, "run configuration JSON")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, mode, profile, seeds, out_dir, config);
    if (*metrics) return cmd_metrics(log_path, csv);
    if (*calibrate) return cmd_calibrate(logs_dir, cal_config, cal_out);
    if (*replay) return cmd_replay(log_path);
    if (*serve) return cmd_serve(scenario, mode, port, initial, realtime, serve_out, config);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
