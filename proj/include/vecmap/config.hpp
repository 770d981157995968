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

#ifndef VECMAP__CONFIG_HPP_
#define VECMAP__CONFIG_HPP_

#include "vecmap/ground_segmentation.hpp"
#include "vecmap/occupancy_grid.hpp"
#include "vecmap/vectorization.hpp"

#include <istream>
#include <stdexcept>
#include <string>

namespace vecmap
{
struct PipelineConfig
{
  FanGridConfig fan;
  GridConfig grid;
  VectorizationConfig vec;
  /// Sensor mounting height; clouds are shifted by it so z = 0 is the ground under the vehicle.
  double sensor_height{1.8};
  /// Largest cloud/pose timestamp gap accepted when pairing [s].
  double pose_gate{0.05};

  void validate() const;
};

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` lines, `#` comments. Unknown keys and bad values throw ConfigError naming
/// the key; the result is validated.
PipelineConfig parse_config(std::istream & in);
PipelineConfig load_config(const std::string & path);

}  // namespace vecmap

#endif  // VECMAP__CONFIG_HPP_
