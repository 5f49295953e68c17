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

#include "benthos/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace benthos {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniData parse_ini(const std::string& text) {
  IniData data;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line_no);
      data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (section.empty()) throw ParseError("key outside any section", line_no);
    data[section][key] = value;
  }
  return data;
}

namespace {

/// Tracks consumed keys so leftovers (typos) can be reported.
class IniReader {
 public:
  explicit IniReader(IniData data) : data_(std::move(data)) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = data_.find(sec);
    return s != data_.end() && s->second.count(key) > 0;
  }

  std::string str(const std::string& sec, const std::string& key,
                  const std::string& fallback) {
    const auto s = data_.find(sec);
    if (s == data_.end()) return fallback;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return fallback;
    used_.insert(sec + "." + key);
    return k->second;
  }

  double num(const std::string& sec, const std::string& key, double fallback) {
    const std::string v = str(sec, key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ValidationError("bad numeric value for " + sec + "." + key +
                            ": '" + v + "'");
    }
  }

  int integer(const std::string& sec, const std::string& key, int fallback) {
    const double d = num(sec, key, fallback);
    const int i = static_cast<int>(std::lround(d));
    if (std::abs(d - i) > 1e-9) {
      throw ValidationError(sec + "." + key + " must be an integer");
    }
    return i;
  }

  bool boolean(const std::string& sec, const std::string& key, bool fallback) {
    const std::string v = str(sec, key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("bad boolean for " + sec + "." + key + ": '" + v +
                          "'");
  }

  void check_all_consumed() const {
    for (const auto& [sec, kv] : data_) {
      for (const auto& [key, value] : kv) {
        if (used_.count(sec + "." + key) == 0) {
          throw ValidationError("unknown config key: " + sec + "." + key);
        }
      }
    }
  }

 private:
  IniData data_;
  std::set<std::string> used_;
};

}  // namespace

MissionConfig mission_config_from_ini(const std::string& text) {
  IniReader r(parse_ini(text));
  MissionConfig c = MissionConfig::defaults();

  c.planner = planner_from_string(
      r.str("mission", "planner", to_string(c.planner)));
  c.t_total = r.num("mission", "t_total", c.t_total);
  c.dt = r.num("mission", "dt", c.dt);
  c.n_exec = r.integer("mission", "n_exec", c.n_exec);
  c.seed = static_cast<std::uint64_t>(r.num("mission", "seed",
                                            static_cast<double>(c.seed)));
  c.stall_factor = r.num("mission", "stall_factor", c.stall_factor);

  const std::string source = r.str("map", "source", "generate");
  if (source == "file") {
    c.map_from_file = true;
    c.map_path = r.str("map", "path", "");
  } else if (source == "generate") {
    c.map_from_file = false;
  } else {
    throw ValidationError("map.source must be 'generate' or 'file'");
  }
  const std::uint64_t map_seed = static_cast<std::uint64_t>(
      r.num("map", "seed", static_cast<double>(c.map_gen.seed)));
  const std::string diff = r.str("map", "difficulty", "");
  if (!diff.empty()) {
    c.map_gen = map_gen_preset(difficulty_from_string(diff), map_seed);
    c.difficulty = diff;
  } else {
    c.map_gen.seed = map_seed;
  }
  c.map_gen.width_m = r.num("map", "width_m", c.map_gen.width_m);
  c.map_gen.height_m = r.num("map", "height_m", c.map_gen.height_m);
  c.map_gen.cell_size = r.num("map", "cell_size", c.map_gen.cell_size);
  c.map_gen.n_blobs = r.integer("map", "n_blobs", c.map_gen.n_blobs);
  c.map_gen.blob_radius_mean =
      r.num("map", "blob_radius_mean", c.map_gen.blob_radius_mean);
  c.map_gen.blob_radius_std =
      r.num("map", "blob_radius_std", c.map_gen.blob_radius_std);
  c.map_gen.substrate_fill_target =
      r.num("map", "substrate_fill_target", c.map_gen.substrate_fill_target);
  c.map_gen.coral_density =
      r.num("map", "coral_density", c.map_gen.coral_density);

  c.start_auto = r.boolean("start", "auto", c.start_auto);
  c.start_x = r.num("start", "x", c.start_x);
  c.start_y = r.num("start", "y", c.start_y);
  c.start_theta = r.num("start", "theta", c.start_theta);
  c.start_margin = r.num("start", "margin", c.start_margin);

  auto scout = [&r](const std::string& sec, ScoutSensorSpec& s) {
    s.r_max = r.num(sec, "r_max", s.r_max);
    s.fov_deg = r.num(sec, "fov_deg", s.fov_deg);
    s.tp_slope = r.num(sec, "tp_slope", s.tp_slope);
    s.fp_slope = r.num(sec, "fp_slope", s.fp_slope);
  };
  scout("sensors.fls", c.fls);
  scout("sensors.flc", c.flc);
  c.dlc.side_len = r.num("sensors.dlc", "side_len", c.dlc.side_len);

  c.ell_min = r.num("belief", "ell_min", c.ell_min);
  c.ell_max = r.num("belief", "ell_max", c.ell_max);
  c.delta = r.num("belief", "delta", c.delta);

  c.global_cfg.macro_size = r.num("global", "macro_size", c.global_cfg.macro_size);
  c.global_cfg.micro_size = r.num("global", "micro_size", c.global_cfg.micro_size);
  c.global_cfg.h_split = r.num("global", "h_split", c.global_cfg.h_split);
  c.global_cfg.beta = r.num("global", "beta", c.global_cfg.beta);
  c.global_cfg.c_factor = r.num("global", "c_factor", c.global_cfg.c_factor);
  c.global_cfg.gp.lengthscale =
      r.num("global", "gp_lengthscale", c.global_cfg.gp.lengthscale);
  c.global_cfg.gp.signal_variance =
      r.num("global", "gp_signal_variance", c.global_cfg.gp.signal_variance);
  c.global_cfg.gp.prior_mean =
      r.num("global", "gp_prior_mean", c.global_cfg.gp.prior_mean);
  c.global_cfg.op.grasp_alpha =
      r.num("global", "op_grasp_alpha", c.global_cfg.op.grasp_alpha);
  c.global_cfg.op.max_stale_iters =
      r.integer("global", "op_max_stale", c.global_cfg.op.max_stale_iters);
  c.global_cfg.op.max_total_iters =
      r.integer("global", "op_max_iters", c.global_cfg.op.max_total_iters);
  c.global_cfg.op.time_cap_s =
      r.num("global", "op_time_cap_s", c.global_cfg.op.time_cap_s);

  c.local_cfg.dt = c.dt;
  c.local_cfg.v_max = r.num("local", "v_max", c.local_cfg.v_max);
  c.local_cfg.omega_max = r.num("local", "omega_max", c.local_cfg.omega_max);
  c.local_cfg.h_max = r.integer("local", "h_max", c.local_cfg.h_max);
  c.local_cfg.max_iters = r.integer("local", "max_iters", c.local_cfg.max_iters);
  c.local_cfg.time_cap_s = r.num("local", "time_cap_s", c.local_cfg.time_cap_s);
  c.local_cfg.weights.w_s = r.num("local", "w_sub", c.local_cfg.weights.w_s);
  c.local_cfg.weights.w_c = r.num("local", "w_search", c.local_cfg.weights.w_c);
  c.local_cfg.weights.w_samp = r.num("local", "w_samp", c.local_cfg.weights.w_samp);
  c.local_cfg.weights.w_energy =
      r.num("local", "w_energy", c.local_cfg.weights.w_energy);
  c.local_cfg.weights.w_jerk = r.num("local", "w_jerk", c.local_cfg.weights.w_jerk);
  c.local_cfg.weights.w_terminal =
      r.num("local", "w_terminal", c.local_cfg.weights.w_terminal);
  c.local_cfg.proxy.gamma_d = r.num("local", "gamma_d", c.local_cfg.proxy.gamma_d);
  c.local_cfg.proxy.gamma_a = r.num("local", "gamma_a", c.local_cfg.proxy.gamma_a);
  c.local_cfg.proxy.epsilon = r.num("local", "epsilon", c.local_cfg.proxy.epsilon);
  c.local_cfg.proxy.eta_down =
      r.num("local", "eta_down", c.local_cfg.proxy.eta_down);
  c.local_cfg.proxy.lambda_sat =
      r.num("local", "lambda_sat", c.local_cfg.proxy.lambda_sat);
  c.local_cfg.proxy.pooling = r.integer("local", "pooling", c.local_cfg.proxy.pooling);
  c.local_cfg.active_entropy_min =
      r.num("local", "active_entropy_min", c.local_cfg.active_entropy_min);

  c.mcts.dt = c.dt;
  c.mcts.v = r.num("mcts", "v", c.mcts.v);
  c.mcts.omega = r.num("mcts", "omega", c.mcts.omega);
  c.mcts.rollout_depth = r.integer("mcts", "rollout_depth", c.mcts.rollout_depth);
  c.mcts.discount = r.num("mcts", "discount", c.mcts.discount);
  c.mcts.c_uct = r.num("mcts", "c_uct", c.mcts.c_uct);
  c.mcts.n_sims = r.integer("mcts", "n_sims", c.mcts.n_sims);
  c.mcts.time_cap_s = r.num("mcts", "time_cap_s", c.mcts.time_cap_s);
  c.mcts.info_bonus = r.num("mcts", "info_bonus", c.mcts.info_bonus);
  c.mcts.pooling = r.integer("mcts", "pooling", c.mcts.pooling);

  c.boustrophedon_spacing =
      r.num("boustrophedon", "spacing", c.boustrophedon_spacing);

  r.check_all_consumed();
  c.validate();
  return c;
}

MissionConfig load_mission_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return mission_config_from_ini(ss.str());
}

std::string mission_config_to_ini(const MissionConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "# Mission configuration (all values shown; defaults match the\n"
        "# shipped experiment settings).\n\n";
  os << "[mission]\n";
  os << "planner = " << to_string(c.planner) << "\n";
  os << "t_total = " << c.t_total << "\n";
  os << "dt = " << c.dt << "\n";
  os << "n_exec = " << c.n_exec << "\n";
  os << "seed = " << c.seed << "\n";
  os << "stall_factor = " << c.stall_factor << "\n\n";

  os << "[map]\n";
  if (c.map_from_file) {
    os << "source = file\n";
    os << "path = " << c.map_path << "\n";
  } else {
    os << "source = generate\n";
    os << "seed = " << c.map_gen.seed << "\n";
    os << "width_m = " << c.map_gen.width_m << "\n";
    os << "height_m = " << c.map_gen.height_m << "\n";
    os << "cell_size = " << c.map_gen.cell_size << "\n";
    os << "n_blobs = " << c.map_gen.n_blobs << "\n";
    os << "blob_radius_mean = " << c.map_gen.blob_radius_mean << "\n";
    os << "blob_radius_std = " << c.map_gen.blob_radius_std << "\n";
    os << "substrate_fill_target = " << c.map_gen.substrate_fill_target << "\n";
    os << "coral_density = " << c.map_gen.coral_density << "\n";
  }
  os << "\n[start]\n";
  os << "auto = " << (c.start_auto ? "true" : "false") << "\n";
  os << "x = " << c.start_x << "\n";
  os << "y = " << c.start_y << "\n";
  os << "theta = " << c.start_theta << "\n";
  os << "margin = " << c.start_margin << "\n";

  auto scout = [&os](const char* sec, const ScoutSensorSpec& s) {
    os << "\n[" << sec << "]\n";
    os << "r_max = " << s.r_max << "\n";
    os << "fov_deg = " << s.fov_deg << "\n";
    os << "tp_slope = " << s.tp_slope << "\n";
    os << "fp_slope = " << s.fp_slope << "\n";
  };
  scout("sensors.fls", c.fls);
  scout("sensors.flc", c.flc);
  os << "\n[sensors.dlc]\n";
  os << "side_len = " << c.dlc.side_len << "\n";

  os << "\n[belief]\n";
  os << "ell_min = " << c.ell_min << "\n";
  os << "ell_max = " << c.ell_max << "\n";
  os << "delta = " << c.delta << "\n";

  os << "\n[global]\n";
  os << "macro_size = " << c.global_cfg.macro_size << "\n";
  os << "micro_size = " << c.global_cfg.micro_size << "\n";
  os << "h_split = " << c.global_cfg.h_split << "\n";
  os << "beta = " << c.global_cfg.beta << "\n";
  os << "c_factor = " << c.global_cfg.c_factor << "\n";
  os << "gp_lengthscale = " << c.global_cfg.gp.lengthscale << "\n";
  os << "gp_signal_variance = " << c.global_cfg.gp.signal_variance << "\n";
  os << "gp_prior_mean = " << c.global_cfg.gp.prior_mean << "\n";
  os << "op_grasp_alpha = " << c.global_cfg.op.grasp_alpha << "\n";
  os << "op_max_stale = " << c.global_cfg.op.max_stale_iters << "\n";
  os << "op_max_iters = " << c.global_cfg.op.max_total_iters << "\n";
  os << "op_time_cap_s = " << c.global_cfg.op.time_cap_s << "\n";

  os << "\n[local]\n";
  os << "v_max = " << c.local_cfg.v_max << "\n";
  os << "omega_max = " << c.local_cfg.omega_max << "\n";
  os << "h_max = " << c.local_cfg.h_max << "\n";
  os << "max_iters = " << c.local_cfg.max_iters << "\n";
  os << "time_cap_s = " << c.local_cfg.time_cap_s << "\n";
  os << "w_sub = " << c.local_cfg.weights.w_s << "\n";
  os << "w_search = " << c.local_cfg.weights.w_c << "\n";
  os << "w_samp = " << c.local_cfg.weights.w_samp << "\n";
  os << "w_energy = " << c.local_cfg.weights.w_energy << "\n";
  os << "w_jerk = " << c.local_cfg.weights.w_jerk << "\n";
  os << "w_terminal = " << c.local_cfg.weights.w_terminal << "\n";
  os << "gamma_d = " << c.local_cfg.proxy.gamma_d << "\n";
  os << "gamma_a = " << c.local_cfg.proxy.gamma_a << "\n";
  os << "epsilon = " << c.local_cfg.proxy.epsilon << "\n";
  os << "eta_down = " << c.local_cfg.proxy.eta_down << "\n";
  os << "lambda_sat = " << c.local_cfg.proxy.lambda_sat << "\n";
  os << "pooling = " << c.local_cfg.proxy.pooling << "\n";
  os << "active_entropy_min = " << c.local_cfg.active_entropy_min << "\n";

  os << "\n[mcts]\n";
  os << "v = " << c.mcts.v << "\n";
  os << "omega = " << c.mcts.omega << "\n";
  os << "rollout_depth = " << c.mcts.rollout_depth << "\n";
  os << "discount = " << c.mcts.discount << "\n";
  os << "c_uct = " << c.mcts.c_uct << "\n";
  os << "n_sims = " << c.mcts.n_sims << "\n";
  os << "time_cap_s = " << c.mcts.time_cap_s << "\n";
  os << "info_bonus = " << c.mcts.info_bonus << "\n";
  os << "pooling = " << c.mcts.pooling << "\n";

  os << "\n[boustrophedon]\n";
  os << "spacing = " << c.boustrophedon_spacing << "\n";
  return os.str();
}

}  // namespace benthos
