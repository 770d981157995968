// Copyright 2026 The vecmap Authors
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

#include "vecmap/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <string_view>

namespace vecmap
{
namespace
{
std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T & out)
{
  const char * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

using Setter = std::function<bool(PipelineConfig &, std::string_view)>;

Setter real(double PipelineConfig::*group_field)
{
  return [group_field](PipelineConfig & c, std::string_view v) {
    return parse_number(v, c.*group_field);
  };
}

template <typename Group, typename T>
Setter member(Group PipelineConfig::*group, T Group::*field)
{
  return [group, field](PipelineConfig & c, std::string_view v) {
    return parse_number(v, (c.*group).*field);
  };
}

const std::map<std::string, Setter, std::less<>> & setters()
{
  static const std::map<std::string, Setter, std::less<>> table{
    {"delta_a", member(&PipelineConfig::fan, &FanGridConfig::delta_a)},
    {"delta_d", member(&PipelineConfig::fan, &FanGridConfig::delta_d)},
    {"d_min", member(&PipelineConfig::fan, &FanGridConfig::d_min)},
    {"d_max", member(&PipelineConfig::fan, &FanGridConfig::d_max)},
    {"delta_s", member(&PipelineConfig::fan, &FanGridConfig::delta_s)},
    {"g_low", member(&PipelineConfig::fan, &FanGridConfig::g_low)},
    {"g_high", member(&PipelineConfig::fan, &FanGridConfig::g_high)},
    {"seed_z_tol", member(&PipelineConfig::fan, &FanGridConfig::seed_z_tol)},
    {"max_slope", member(&PipelineConfig::fan, &FanGridConfig::max_slope)},
    {"fit_dist_tol", member(&PipelineConfig::fan, &FanGridConfig::fit_dist_tol)},
    {"r_m", member(&PipelineConfig::grid, &GridConfig::resolution)},
    {"w", member(&PipelineConfig::grid, &GridConfig::width)},
    {"h", member(&PipelineConfig::grid, &GridConfig::height)},
    {"alpha_hit", member(&PipelineConfig::grid, &GridConfig::alpha_hit)},
    {"alpha_miss", member(&PipelineConfig::grid, &GridConfig::alpha_miss)},
    {"l_up", member(&PipelineConfig::grid, &GridConfig::l_up)},
    {"l_low", member(&PipelineConfig::grid, &GridConfig::l_low)},
    {"lambda", member(&PipelineConfig::grid, &GridConfig::lambda)},
    {"beta_occ", member(&PipelineConfig::grid, &GridConfig::beta_occ)},
    {"beta_free", member(&PipelineConfig::grid, &GridConfig::beta_free)},
    {"submap_w", member(&PipelineConfig::vec, &VectorizationConfig::submap_w)},
    {"submap_h", member(&PipelineConfig::vec, &VectorizationConfig::submap_h)},
    {"delta_in", member(&PipelineConfig::vec, &VectorizationConfig::delta_in)},
    {"delta_ou", member(&PipelineConfig::vec, &VectorizationConfig::delta_ou)},
    {"k_min", member(&PipelineConfig::vec, &VectorizationConfig::k_min)},
    {"morph_kernel", member(&PipelineConfig::vec, &VectorizationConfig::morph_kernel)},
    {"morph_dilate", member(&PipelineConfig::vec, &VectorizationConfig::morph_dilate)},
    {"sensor_height", real(&PipelineConfig::sensor_height)},
    {"pose_gate", real(&PipelineConfig::pose_gate)},
  };
  return table;
}

}  // namespace

void PipelineConfig::validate() const
{
  fan.validate();
  grid.validate();
  vec.validate(grid);
  if (!(sensor_height >= 0.0)) {
    throw std::invalid_argument("sensor_height: must be non-negative");
  }
  if (!(pose_gate >= 0.0)) {
    throw std::invalid_argument("pose_gate: must be non-negative");
  }
}

PipelineConfig parse_config(std::istream & in)
{
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
    if (!it->second(cfg, value)) {
      throw ConfigError(
        where + ": key '" + std::string(key) + "': unparseable value '" + std::string(value) + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  return parse_config(in);
}

}  // namespace vecmap
