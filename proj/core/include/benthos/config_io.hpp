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

// Mission configuration file: INI-style sections of key = value pairs,
// grouped the way the shipped defaults are documented. '#' and ';' start
// comments. Unknown sections or keys are rejected so typos surface early.

#include <map>
#include <string>

#include "benthos/mission.hpp"

namespace benthos {

using IniData = std::map<std::string, std::map<std::string, std::string>>;

IniData parse_ini(const std::string& text);

/// Parses a config document; values omitted fall back to the shipped
/// defaults. A [map] difficulty preset is applied first, explicit keys
/// override it.
MissionConfig mission_config_from_ini(const std::string& text);

MissionConfig load_mission_config(const std::string& path);

/// Serializes a config as a complete, commented document; parsing it back
/// reproduces the config.
std::string mission_config_to_ini(const MissionConfig& cfg);

}  // namespace benthos
