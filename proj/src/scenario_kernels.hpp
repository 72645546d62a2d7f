// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

// Pointwise pieces shared by the OpenMP and serial scenario loops.

#include <cstddef>
#include <vector>

#include "sqzf/scenario.hpp"

namespace sqzf::detail {

struct FamilyBuffers {
  std::vector<double> in_max, in_min, out_max, out_min, lo;

  explicit FamilyBuffers(std::size_t n) : in_max(n), in_min(n), out_max(n), out_min(n), lo(n) {}
};

void family_point(const ScenarioConfig& config, std::size_t i, FamilyBuffers& buf);
SpectrumFamily assemble_family(const ScenarioConfig& config, FamilyBuffers&& buf);

std::vector<double> scan_angles(int theta_samples);
// Fills column i of the row-major theta x frequency surface.
void scan_point(const ScenarioConfig& config, const std::vector<double>& thetas, std::size_t i,
                std::vector<double>& surface, std::vector<double>& env_min, std::vector<double>& env_max);
PhaseScanResult assemble_scan(const ScenarioConfig& config, std::vector<double>&& thetas,
                              std::vector<double>&& surface, std::vector<double>&& env_min,
                              std::vector<double>&& env_max);

struct TrackingBuffers {
  std::vector<double> theta_star, tracked_min;
  std::vector<std::vector<double>> anchor_db;
};

// Validates the phase model and resolves the LO angle at each anchor.
std::vector<double> anchor_angles(const ScenarioConfig& config);
void tracking_point(const ScenarioConfig& config, const std::vector<double>& anchor_theta, std::size_t i,
                    TrackingBuffers& buf);
AngleTrackingResult assemble_tracking(const ScenarioConfig& config, const std::vector<double>& anchor_theta,
                                      TrackingBuffers&& buf);

}  // namespace sqzf::detail
