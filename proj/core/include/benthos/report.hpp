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

#pragma once

// Log persistence and result exports. Schemas are documented in the
// README and kept stable: downstream plotting reads these files.

#include <iosfwd>
#include <string>
#include <vector>

#include "benthos/mission.hpp"

namespace benthos {

void write_mission_log_json(const MissionLog& log, const std::string& path);
MissionLog load_mission_log_json(const std::string& path);

/// The log's simulated content serialized without wall-time fields; two
/// runs of the same (config, seed) produce byte-identical payloads.
std::string deterministic_payload_json(const MissionLog& log);

/// Tidy long-format series (run_id,t,metric,value) or a JSON summary.
/// format must be "csv" or "json".
void export_results(const MissionLog& log, const std::string& format,
                    const std::string& path);
void export_results(const MissionLog& log, const std::string& format,
                    std::ostream& os);

/// Writes the full sweep artifact tree under out_dir:
///   runs/run_<idx>_<planner>_s<seed>.json   per-run logs
///   series.csv       run_id,t,metric,value
///   aggregate.csv    planner,difficulty,t_bin,ratio_mean,ratio_std,n
///   timings.csv      run_id,planner,scope,ms
///   histogram.csv    planner,scope,bin_lo_ms,bin_hi_ms,count
///   summary.json     per-run rows + aggregate ratios + timing stats
void write_sweep_outputs(const std::vector<RunResult>& results,
                         const std::string& out_dir, double bin_width = 10.0);

/// `report` subcommand backend: `in` is either a single mission-log JSON
/// (re-exported via export_results to out/stdout) or a sweep directory
/// (aggregates regenerated from runs/*.json into out_dir or in place).
void report_from_path(const std::string& in, const std::string& format,
                      const std::string& out);

}  // namespace benthos
