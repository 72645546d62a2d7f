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

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sqzf/lineshape.hpp"
#include "sqzf/noise.hpp"

namespace sqzf {

enum class PhaseModel { ZeroPhase, MinimumPhase, ExplicitTable };

std::string_view to_string(PhaseModel m);
PhaseModel parse_phase_model(std::string_view s);

// Values sampled on an increasing grid, linearly interpolated.
struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;

  // Throws InvalidArgument outside [x.front(), x.back()].
  double at(double xq) const;
};

struct FilterDomain {
  // Largest sideband frequency the response must cover. 0 picks
  // 50 * gamma + |delta0| for analytic magnitudes.
  double max_hz = 0.0;
  // Half the number of points on the symmetric phase grid.
  int half_points = 4096;
  double padding_factor = 4.0;
};

// Complex transmission of the filter as a function of sideband frequency.
// Magnitude comes from a fitted lineshape or a table over signed detuning;
// phase is zero, minimum-phase, or caller supplied (signed frequency table).
class FilterResponse {
 public:
  static FilterResponse from_lineshape(const LineshapeParams& params, PhaseModel model,
                                       const FilterDomain& domain = {},
                                       std::optional<SampledCurve> phase_table = std::nullopt);

  // Magnitude table over signed frequency. MinimumPhase requires a
  // symmetric uniform grid.
  static FilterResponse from_table(SampledCurve magnitude, PhaseModel model,
                                   std::optional<SampledCurve> phase_table = std::nullopt,
                                   double padding_factor = 4.0);

  // Response at sideband omega >= 0. Throws InvalidArgument outside the domain.
  SidebandTransmission at(double omega) const;

  PhaseModel phase_model() const { return model_; }
  double domain_max() const { return domain_max_; }
  const std::optional<LineshapeParams>& lineshape() const { return params_; }
  // Signed-frequency phase table (empty for ZeroPhase).
  const SampledCurve& phase() const { return phase_; }

 private:
  FilterResponse() = default;
  double magnitude_at(double signed_omega) const;
  double phase_at(double signed_omega) const;
  void check_passivity() const;

  std::optional<LineshapeParams> params_;
  SampledCurve magnitude_;
  SampledCurve phase_;
  PhaseModel model_ = PhaseModel::ZeroPhase;
  double domain_max_ = std::numeric_limits<double>::infinity();
};

// Identity filter, T+- = 1 with no phase, valid at every frequency.
FilterResponse unit_filter();

}  // namespace sqzf
