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


// Single-threaded reference versions of the scenario loops.

#include "scenario_kernels.hpp"

namespace sqzf::serial {

SpectrumFamily predict_spectrum(const ScenarioConfig& config) {
  validate_config(config);
  const std::size_t n = config.grid.points.size();
  detail::FamilyBuffers buf(n);
  for (std::size_t i = 0; i < n; ++i) detail::family_point(config, i, buf);
  return detail::assemble_family(config, std::move(buf));
}

PhaseScanResult phase_scan(const ScenarioConfig& config, int theta_samples) {
  validate_config(config);
  std::vector<double> thetas = detail::scan_angles(theta_samples);
  const std::size_t n = config.grid.points.size();
  std::vector<double> surface(thetas.size() * n);
  std::vector<double> env_min(n);
  std::vector<double> env_max(n);
  for (std::size_t i = 0; i < n; ++i) detail::scan_point(config, thetas, i, surface, env_min, env_max);
  return detail::assemble_scan(config, std::move(thetas), std::move(surface), std::move(env_min),
                               std::move(env_max));
}

AngleTrackingResult angle_tracking(const ScenarioConfig& config) {
  validate_config(config);
  const std::vector<double> anchor_theta = detail::anchor_angles(config);
  const std::size_t n = config.grid.points.size();
  detail::TrackingBuffers buf{std::vector<double>(n), std::vector<double>(n),
                              std::vector<std::vector<double>>(anchor_theta.size(), std::vector<double>(n))};
  for (std::size_t i = 0; i < n; ++i) detail::tracking_point(config, anchor_theta, i, buf);
  return detail::assemble_tracking(config, anchor_theta, std::move(buf));
}

}  // namespace sqzf::serial
