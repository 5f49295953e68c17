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

#include "benthos/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace benthos {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json log_to_json(const MissionLog& log, bool include_timing) {
  json j;
  j["meta"] = {
      {"planner", log.planner},
      {"seed", log.seed},
      {"difficulty", log.difficulty},
      {"t_total", log.t_total},
      {"dt", log.dt},
      {"map",
       {{"rows", log.map_rows},
        {"cols", log.map_cols},
        {"cell_size", log.cell_size},
        {"total_coral", log.total_coral},
        {"total_substrate", log.total_substrate}}},
  };
  j["summary"] = {
      {"final_t", log.summary.final_t},
      {"steps", log.summary.steps},
      {"samples", log.summary.samples},
      {"total_coral", log.summary.total_coral},
      {"ratio", log.summary.ratio_defined ? json(log.summary.ratio)
                                          : json(nullptr)},
      {"distance", log.summary.distance},
      {"global_calls", log.summary.global_calls},
      {"local_solves", log.summary.local_solves},
      {"mcts_decisions", log.summary.mcts_decisions},
  };
  json steps = json::array();
  for (const auto& s : log.steps) {
    steps.push_back({s.t, s.x, s.y, s.theta, s.samples, s.distance});
  }
  j["steps"] = std::move(steps);

  json ge = json::array();
  for (const auto& e : log.global_events) {
    json row = {{"t", e.t},
                {"cause", e.cause},
                {"n_nodes", e.n_nodes},
                {"n_micro", e.n_micro},
                {"n_splits", e.n_splits},
                {"d_budget", e.d_budget},
                {"route_reward", e.route_reward},
                {"route_length", e.route_length},
                {"route_size", e.route_size},
                {"chosen_node", e.chosen_node},
                {"t_local", e.t_local},
                {"fallback", e.fallback}};
    if (include_timing) row["solve_ms"] = e.solve_ms;
    ge.push_back(std::move(row));
  }
  j["global_events"] = std::move(ge);

  json le = json::array();
  for (const auto& e : log.local_events) {
    json row = {{"t", e.t},
                {"horizon", e.horizon},
                {"iterations", e.iterations},
                {"evaluations", e.evaluations},
                {"converged", e.converged},
                {"diverged", e.diverged},
                {"cost", e.cost},
                {"j_scout", e.j_scout},
                {"j_samp", e.j_samp},
                {"j_reg", e.j_reg}};
    if (include_timing) row["solve_ms"] = e.solve_ms;
    le.push_back(std::move(row));
  }
  j["local_events"] = std::move(le);

  json me = json::array();
  for (const auto& e : log.mcts_events) {
    json row = {{"t", e.t},
                {"simulations", e.simulations},
                {"root_value", e.root_value},
                {"random_fallback", e.random_fallback}};
    if (include_timing) row["solve_ms"] = e.solve_ms;
    me.push_back(std::move(row));
  }
  j["mcts_events"] = std::move(me);
  return j;
}

}  // namespace

void write_mission_log_json(const MissionLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << log_to_json(log, /*include_timing=*/true).dump(1) << '\n';
  if (!f) throw ValidationError("write failed: " + path);
}

std::string deterministic_payload_json(const MissionLog& log) {
  return log_to_json(log, /*include_timing=*/false).dump();
}

MissionLog load_mission_log_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open log: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad mission log JSON in ") + path + ": " +
                         e.what(),
                     0);
  }
  MissionLog log;
  const json& meta = j.at("meta");
  log.planner = meta.at("planner").get<std::string>();
  log.seed = meta.at("seed").get<std::uint64_t>();
  log.difficulty = meta.at("difficulty").get<std::string>();
  log.t_total = meta.at("t_total").get<double>();
  log.dt = meta.at("dt").get<double>();
  const json& m = meta.at("map");
  log.map_rows = m.at("rows").get<int>();
  log.map_cols = m.at("cols").get<int>();
  log.cell_size = m.at("cell_size").get<double>();
  log.total_coral = m.at("total_coral").get<int>();
  log.total_substrate = m.at("total_substrate").get<int>();

  const json& s = j.at("summary");
  log.summary.final_t = s.at("final_t").get<double>();
  log.summary.steps = s.at("steps").get<int>();
  log.summary.samples = s.at("samples").get<int>();
  log.summary.total_coral = s.at("total_coral").get<int>();
  log.summary.ratio_defined = !s.at("ratio").is_null();
  log.summary.ratio =
      log.summary.ratio_defined ? s.at("ratio").get<double>() : 0.0;
  log.summary.distance = s.at("distance").get<double>();
  log.summary.global_calls = s.at("global_calls").get<int>();
  log.summary.local_solves = s.at("local_solves").get<int>();
  log.summary.mcts_decisions = s.at("mcts_decisions").get<int>();

  for (const auto& row : j.at("steps")) {
    log.steps.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                         row.at(2).get<double>(), row.at(3).get<double>(),
                         row.at(4).get<int>(), row.at(5).get<double>()});
  }
  for (const auto& row : j.at("global_events")) {
    GlobalPlanRecord e;
    e.t = row.at("t").get<double>();
    e.cause = row.at("cause").get<std::string>();
    e.n_nodes = row.at("n_nodes").get<int>();
    e.n_micro = row.at("n_micro").get<int>();
    e.n_splits = row.at("n_splits").get<int>();
    e.d_budget = row.at("d_budget").get<double>();
    e.route_reward = row.at("route_reward").get<double>();
    e.route_length = row.at("route_length").get<double>();
    e.route_size = row.at("route_size").get<int>();
    e.chosen_node = row.at("chosen_node").get<int>();
    e.t_local = row.at("t_local").get<double>();
    e.fallback = row.at("fallback").get<bool>();
    if (row.contains("solve_ms")) e.solve_ms = row.at("solve_ms").get<double>();
    log.global_events.push_back(e);
  }
  for (const auto& row : j.at("local_events")) {
    LocalPlanRecord e;
    e.t = row.at("t").get<double>();
    e.horizon = row.at("horizon").get<int>();
    e.iterations = row.at("iterations").get<int>();
    e.evaluations = row.at("evaluations").get<int>();
    e.converged = row.at("converged").get<bool>();
    e.diverged = row.at("diverged").get<bool>();
    e.cost = row.at("cost").get<double>();
    e.j_scout = row.at("j_scout").get<double>();
    e.j_samp = row.at("j_samp").get<double>();
    e.j_reg = row.at("j_reg").get<double>();
    if (row.contains("solve_ms")) e.solve_ms = row.at("solve_ms").get<double>();
    log.local_events.push_back(e);
  }
  for (const auto& row : j.at("mcts_events")) {
    MctsRecord e;
    e.t = row.at("t").get<double>();
    e.simulations = row.at("simulations").get<int>();
    e.root_value = row.at("root_value").get<double>();
    e.random_fallback = row.at("random_fallback").get<bool>();
    if (row.contains("solve_ms")) e.solve_ms = row.at("solve_ms").get<double>();
    log.mcts_events.push_back(e);
  }
  return log;
}

namespace {

void write_series_rows(std::ostream& os, const std::string& run_id,
                       const MissionLog& log) {
  os.precision(17);
  for (const auto& s : log.steps) {
    if (log.total_coral > 0) {
      os << run_id << ',' << s.t << ",ratio,"
         << static_cast<double>(s.samples) / log.total_coral << '\n';
    }
    os << run_id << ',' << s.t << ",samples," << s.samples << '\n';
    os << run_id << ',' << s.t << ",distance," << s.distance << '\n';
  }
}

}  // namespace

void export_results(const MissionLog& log, const std::string& format,
                    std::ostream& os) {
  if (format == "csv") {
    os << "run_id,t,metric,value\n";
    const std::string run_id =
        log.planner + "_s" + std::to_string(log.seed);
    write_series_rows(os, run_id, log);
  } else if (format == "json") {
    json j;
    j["summary"] = log_to_json(log, true)["summary"];
    j["meta"] = log_to_json(log, true)["meta"];
    os << j.dump(1) << '\n';
  } else {
    throw ValidationError("unknown export format: " + format);
  }
}

void export_results(const MissionLog& log, const std::string& format,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  export_results(log, format, f);
  if (!f) throw ValidationError("write failed: " + path);
}

namespace {

double ratio_at(const MissionLog& log, double t) {
  // Steps are time-ordered; the ratio curve is a right-continuous step
  // function of the cumulative sample count.
  int samples = 0;
  for (const auto& s : log.steps) {
    if (s.t > t) break;
    samples = s.samples;
  }
  return static_cast<double>(samples) / log.total_coral;
}

struct Stats {
  int n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  s.n = static_cast<int>(v.size());
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double idx = q * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

}  // namespace

void write_sweep_outputs(const std::vector<RunResult>& results,
                         const std::string& out_dir, double bin_width) {
  if (!(bin_width > 0.0)) throw ValidationError("bin_width must be positive");
  fs::create_directories(fs::path(out_dir) / "runs");

  // Per-run logs and the tidy series file.
  std::ofstream series(fs::path(out_dir) / "series.csv");
  if (!series) throw ValidationError("cannot write series.csv in " + out_dir);
  series << "run_id,t,metric,value\n";
  std::vector<std::string> run_ids(results.size());
  for (const auto& r : results) {
    if (!r.ok) continue;
    std::ostringstream id;
    id << "run" << r.index << '_' << r.log.planner << "_s" << r.log.seed;
    run_ids[static_cast<std::size_t>(r.index)] = id.str();
    write_mission_log_json(
        r.log, (fs::path(out_dir) / "runs" / (id.str() + ".json")).string());
    write_series_rows(series, id.str(), r.log);
  }

  // Ratio-vs-time aggregation per (planner, difficulty).
  std::map<std::pair<std::string, std::string>, std::vector<const MissionLog*>>
      groups;
  double t_max = 0.0;
  for (const auto& r : results) {
    if (!r.ok) continue;
    const std::string diff =
        r.log.difficulty.empty() ? "unspecified" : r.log.difficulty;
    groups[{r.log.planner, diff}].push_back(&r.log);
    t_max = std::max(t_max, r.log.t_total);
  }
  {
    std::ofstream agg(fs::path(out_dir) / "aggregate.csv");
    if (!agg) throw ValidationError("cannot write aggregate.csv");
    agg.precision(17);
    agg << "planner,difficulty,t_bin,ratio_mean,ratio_std,n\n";
    for (const auto& [key, logs] : groups) {
      for (double t = 0.0; t <= t_max + 1e-9; t += bin_width) {
        std::vector<double> ratios;
        for (const MissionLog* log : logs) {
          if (log->total_coral > 0 && t <= log->t_total + 1e-9) {
            ratios.push_back(ratio_at(*log, t));
          }
        }
        if (ratios.empty()) continue;
        const Stats st = stats_of(ratios);
        agg << key.first << ',' << key.second << ',' << t << ',' << st.mean
            << ',' << st.std_dev << ',' << st.n << '\n';
      }
    }
  }

  // Solver timing exports (wall clock; analysis data, not determinism
  // payload).
  std::map<std::pair<std::string, std::string>, std::vector<double>> timing;
  {
    std::ofstream tm(fs::path(out_dir) / "timings.csv");
    if (!tm) throw ValidationError("cannot write timings.csv");
    tm.precision(17);
    tm << "run_id,planner,scope,ms\n";
    for (const auto& r : results) {
      if (!r.ok) continue;
      const std::string& id = run_ids[static_cast<std::size_t>(r.index)];
      for (const auto& e : r.log.global_events) {
        tm << id << ',' << r.log.planner << ",global," << e.solve_ms << '\n';
        timing[{r.log.planner, "global"}].push_back(e.solve_ms);
      }
      for (const auto& e : r.log.local_events) {
        tm << id << ',' << r.log.planner << ",local," << e.solve_ms << '\n';
        timing[{r.log.planner, "local"}].push_back(e.solve_ms);
      }
      for (const auto& e : r.log.mcts_events) {
        tm << id << ',' << r.log.planner << ",mcts," << e.solve_ms << '\n';
        timing[{r.log.planner, "mcts"}].push_back(e.solve_ms);
      }
    }
  }
  {
    std::ofstream hist(fs::path(out_dir) / "histogram.csv");
    if (!hist) throw ValidationError("cannot write histogram.csv");
    hist.precision(17);
    hist << "planner,scope,bin_lo_ms,bin_hi_ms,count\n";
    constexpr int kBins = 30;
    for (const auto& [key, ms] : timing) {
      const double hi = *std::max_element(ms.begin(), ms.end());
      const double width = hi > 0.0 ? hi / kBins : 1.0;
      std::vector<int> counts(kBins, 0);
      for (double v : ms) {
        int b = static_cast<int>(v / width);
        b = std::clamp(b, 0, kBins - 1);
        ++counts[static_cast<std::size_t>(b)];
      }
      for (int b = 0; b < kBins; ++b) {
        hist << key.first << ',' << key.second << ',' << b * width << ','
             << (b + 1) * width << ',' << counts[static_cast<std::size_t>(b)]
             << '\n';
      }
    }
  }

  // Machine-readable roll-up.
  json summary;
  summary["runs"] = json::array();
  for (const auto& r : results) {
    json row;
    row["run_id"] = r.ok ? run_ids[static_cast<std::size_t>(r.index)]
                         : ("run" + std::to_string(r.index));
    row["label"] = r.label;
    row["ok"] = r.ok;
    if (!r.ok) {
      row["error"] = r.error;
    } else {
      row["planner"] = r.log.planner;
      row["seed"] = r.log.seed;
      row["difficulty"] = r.log.difficulty;
      row["samples"] = r.log.summary.samples;
      row["total_coral"] = r.log.summary.total_coral;
      row["ratio"] = r.log.summary.ratio_defined ? json(r.log.summary.ratio)
                                                 : json(nullptr);
      row["distance"] = r.log.summary.distance;
      row["final_t"] = r.log.summary.final_t;
    }
    summary["runs"].push_back(std::move(row));
  }
  for (const auto& [key, logs] : groups) {
    std::vector<double> finals;
    for (const MissionLog* log : logs) {
      if (log->summary.ratio_defined) finals.push_back(log->summary.ratio);
    }
    const Stats st = stats_of(finals);
    summary["aggregate"][key.first][key.second] = {
        {"n", st.n}, {"ratio_mean", st.mean}, {"ratio_std", st.std_dev}};
  }
  for (const auto& [key, ms] : timing) {
    summary["timing"][key.first][key.second] = {
        {"count", ms.size()},
        {"mean_ms", stats_of(ms).mean},
        {"p50_ms", quantile(ms, 0.5)},
        {"p95_ms", quantile(ms, 0.95)},
        {"max_ms", *std::max_element(ms.begin(), ms.end())}};
  }
  std::ofstream sf(fs::path(out_dir) / "summary.json");
  if (!sf) throw ValidationError("cannot write summary.json");
  sf << summary.dump(1) << '\n';
}

void report_from_path(const std::string& in, const std::string& format,
                      const std::string& out) {
  if (fs::is_directory(in)) {
    const fs::path runs = fs::path(in) / "runs";
    if (!fs::is_directory(runs)) {
      throw ValidationError("sweep directory has no runs/ subdirectory: " + in);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(runs)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunResult> results;
    for (const auto& f : files) {
      RunResult r;
      r.index = static_cast<int>(results.size());
      r.label = f.stem().string();
      r.log = load_mission_log_json(f.string());
      r.ok = true;
      results.push_back(std::move(r));
    }
    if (results.empty()) throw ValidationError("no run logs under " + in);
    write_sweep_outputs(results, out.empty() ? in : out);
    return;
  }
  const MissionLog log = load_mission_log_json(in);
  if (out.empty()) {
    std::ostringstream os;
    export_results(log, format, os);
    std::fputs(os.str().c_str(), stdout);
  } else {
    export_results(log, format, out);
  }
}

}  // namespace benthos
