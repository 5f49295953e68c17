// Copyright 2026 The Benthos Authors.
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

// Command-line front end: map generation, single missions, batch sweeps,
// and report extraction. Machine-readable errors go to stderr as JSON and
// the exit code is nonzero on failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "benthos/config_io.hpp"
#include "benthos/mission.hpp"
#include "benthos/report.hpp"
#include "benthos/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

json run_summary_json(const benthos::MissionLog& log) {
  json j;
  j["planner"] = log.planner;
  j["seed"] = log.seed;
  j["samples"] = log.summary.samples;
  j["total_coral"] = log.summary.total_coral;
  j["ratio"] = log.summary.ratio_defined ? json(log.summary.ratio)
                                         : json(nullptr);
  j["distance"] = log.summary.distance;
  j["final_t"] = log.summary.final_t;
  j["global_calls"] = log.summary.global_calls;
  j["local_solves"] = log.summary.local_solves;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benthos: closed-loop benthic search-and-sample simulator"};
  app.require_subcommand(1);

  // generate-map ------------------------------------------------------------
  auto* gen = app.add_subcommand("generate-map",
                                 "Generate a synthetic clustered map file");
  std::uint64_t gen_seed = 0;
  std::string gen_difficulty = "medium";
  std::string gen_out;
  double gen_width = 0.0, gen_height = 0.0, gen_fill = 0.0, gen_density = -1.0;
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--difficulty", gen_difficulty, "easy|medium|hard")
      ->check(CLI::IsMember({"easy", "medium", "hard"}));
  gen->add_option("--out", gen_out, "Output map path")->required();
  gen->add_option("--width", gen_width, "Map width override (m)");
  gen->add_option("--height", gen_height, "Map height override (m)");
  gen->add_option("--fill", gen_fill, "Substrate fill target override");
  gen->add_option("--density", gen_density, "Coral density override");

  // run ---------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run a single mission");
  std::string run_config, run_planner, run_out;
  std::int64_t run_seed = -1;
  run->add_option("--config", run_config, "Mission config file (INI)");
  run->add_option("--seed", run_seed, "Seed override");
  run->add_option("--planner", run_planner, "himos|boustrophedon|mcts")
      ->check(CLI::IsMember({"himos", "boustrophedon", "mcts"}));
  run->add_option("--out", run_out, "Output directory")->required();

  // sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Run a mission sweep");
  std::string sweep_configs, sweep_seeds, sweep_planners, sweep_out;
  int sweep_jobs = 1;
  sweep->add_option("--configs", sweep_configs,
                    "Comma-separated config files (default: shipped defaults)");
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds")
      ->required();
  sweep->add_option("--planners", sweep_planners,
                    "Comma-separated planner names")
      ->required();
  sweep->add_option("--jobs", sweep_jobs, "Parallel workers");
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  // report --------------------------------------------------------------
  auto* report = app.add_subcommand("report", "Export results");
  std::string rep_in, rep_format = "csv", rep_out;
  report->add_option("--in", rep_in, "Mission log JSON or sweep directory")
      ->required();
  report->add_option("--format", rep_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", rep_out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      benthos::MapGenConfig cfg = benthos::map_gen_preset(
          benthos::difficulty_from_string(gen_difficulty), gen_seed);
      if (gen_width > 0.0) cfg.width_m = gen_width;
      if (gen_height > 0.0) cfg.height_m = gen_height;
      if (gen_fill > 0.0) cfg.substrate_fill_target = gen_fill;
      if (gen_density >= 0.0) cfg.coral_density = gen_density;
      const benthos::GroundTruth gt = benthos::generate_map(cfg);
      benthos::save_map(gt, gen_out);
      json j;
      j["path"] = gen_out;
      j["rows"] = gt.spec.rows;
      j["cols"] = gt.spec.cols;
      j["substrate_cells"] = gt.substrate_count();
      j["coral_cells"] = gt.coral_count();
      std::cout << j.dump(1) << "\n";
    } else if (run->parsed()) {
      benthos::MissionConfig cfg =
          run_config.empty() ? benthos::MissionConfig::defaults()
                             : benthos::load_mission_config(run_config);
      if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
      if (!run_planner.empty()) {
        cfg.planner = benthos::planner_from_string(run_planner);
      }
      const benthos::MissionLog log = benthos::run_mission(cfg);
      fs::create_directories(run_out);
      benthos::write_mission_log_json(
          log, (fs::path(run_out) / "mission_log.json").string());
      benthos::export_results(
          log, "csv", (fs::path(run_out) / "series.csv").string());
      std::cout << run_summary_json(log).dump(1) << "\n";
    } else if (sweep->parsed()) {
      std::vector<benthos::MissionConfig> bases;
      std::vector<std::string> base_names;
      if (sweep_configs.empty()) {
        bases.push_back(benthos::MissionConfig::defaults());
        base_names.push_back("default");
      } else {
        for (const auto& path : split_csv(sweep_configs)) {
          bases.push_back(benthos::load_mission_config(path));
          base_names.push_back(fs::path(path).stem().string());
        }
      }
      std::vector<benthos::SweepItem> items;
      for (std::size_t b = 0; b < bases.size(); ++b) {
        for (const auto& seed_str : split_csv(sweep_seeds)) {
          for (const auto& planner : split_csv(sweep_planners)) {
            benthos::MissionConfig cfg = bases[b];
            cfg.seed = std::stoull(seed_str);
            cfg.planner = benthos::planner_from_string(planner);
            items.push_back(
                {cfg, base_names[b] + "_" + planner + "_s" + seed_str});
          }
        }
      }
      const auto results = benthos::run_sweep(items, sweep_jobs);
      benthos::write_sweep_outputs(results, sweep_out);
      int failed = 0;
      for (const auto& r : results) failed += r.ok ? 0 : 1;
      json j;
      j["runs"] = results.size();
      j["failed"] = failed;
      j["out"] = sweep_out;
      std::cout << j.dump(1) << "\n";
      if (failed == static_cast<int>(results.size())) {
        throw benthos::ValidationError("every sweep run failed");
      }
    } else if (report->parsed()) {
      benthos::report_from_path(rep_in, rep_format, rep_out);
    }
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    err["command"] = app.get_subcommands().empty()
                         ? ""
                         : app.get_subcommands().front()->get_name();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
