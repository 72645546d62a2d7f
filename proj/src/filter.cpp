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


#include "sqzf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqzf/error.hpp"
#include "sqzf/min_phase.hpp"

namespace sqzf {

std::string_view to_string(PhaseModel m) {
  switch (m) {
    case PhaseModel::ZeroPhase: return "zero-phase";
    case PhaseModel::MinimumPhase: return "minimum-phase";
    case PhaseModel::ExplicitTable: return "explicit-table";
  }
  return "?";
}

PhaseModel parse_phase_model(std::string_view s) {
  if (s == "zero-phase") return PhaseModel::ZeroPhase;
  if (s == "minimum-phase") return PhaseModel::MinimumPhase;
  if (s == "explicit-table") return PhaseModel::ExplicitTable;
  throw InvalidArgument("unknown phase model '" + std::string(s) + "'");
}

double SampledCurve::at(double xq) const {
  if (x.empty() || xq < x.front() || xq > x.back()) {
    throw InvalidArgument("frequency " + std::to_string(xq) + " Hz outside tabulated range");
  }
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  if (it == x.end()) return y.back();
  const auto hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double f = (xq - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + f * (y[hi] - y[lo]);
}

namespace {

void check_curve(const SampledCurve& c, std::string_view what) {
  if (c.x.size() != c.y.size() || c.x.size() < 2) {
    throw InvalidArgument(std::string(what) + " table needs matching columns with >= 2 points");
  }
  for (std::size_t i = 1; i < c.x.size(); ++i) {
    if (!(c.x[i] > c.x[i - 1])) {
      throw InvalidArgument(std::string(what) + " table frequencies must be strictly increasing");
    }
  }
}

double symmetric_coverage(const SampledCurve& c) { return std::min(-c.x.front(), c.x.back()); }

}  // namespace

FilterResponse FilterResponse::from_lineshape(const LineshapeParams& params, PhaseModel model,
                                              const FilterDomain& domain,
                                              std::optional<SampledCurve> phase_table) {
  FilterResponse r;
  r.params_ = params;
  r.model_ = model;
  if (!(params.gamma > 0.0)) throw InvalidArgument("lineshape gamma must be positive");
  double max_hz = domain.max_hz > 0.0 ? domain.max_hz : 50.0 * params.gamma + std::abs(params.delta0);

  switch (model) {
    case PhaseModel::ZeroPhase:
      r.domain_max_ = domain.max_hz > 0.0 ? domain.max_hz : std::numeric_limits<double>::infinity();
      break;
    case PhaseModel::MinimumPhase: {
      if (domain.half_points < 2) throw InvalidArgument("phase grid needs half_points >= 2");
      const int n = 2 * domain.half_points + 1;
      const double step = max_hz / domain.half_points;
      SampledCurve mag;
      mag.x.resize(static_cast<std::size_t>(n));
      mag.y.resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const double f = (k - domain.half_points) * step;
        mag.x[static_cast<std::size_t>(k)] = f;
        mag.y[static_cast<std::size_t>(k)] = eval_lineshape(params, f);
      }
      r.phase_.x = mag.x;
      r.phase_.y = minimum_phase(mag.x, mag.y, domain.padding_factor);
      r.domain_max_ = max_hz;
      break;
    }
    case PhaseModel::ExplicitTable:
      if (!phase_table) throw InvalidArgument("explicit-table phase model needs a phase table");
      check_curve(*phase_table, "phase");
      r.phase_ = std::move(*phase_table);
      r.domain_max_ = symmetric_coverage(r.phase_);
      if (domain.max_hz > 0.0) r.domain_max_ = std::min(r.domain_max_, domain.max_hz);
      break;
  }
  if (!(r.domain_max_ > 0.0)) throw InvalidArgument("filter domain is empty");
  r.check_passivity();
  return r;
}

FilterResponse FilterResponse::from_table(SampledCurve magnitude, PhaseModel model,
                                          std::optional<SampledCurve> phase_table, double padding_factor) {
  check_curve(magnitude, "magnitude");
  FilterResponse r;
  r.model_ = model;
  r.magnitude_ = std::move(magnitude);
  r.domain_max_ = symmetric_coverage(r.magnitude_);
  switch (model) {
    case PhaseModel::ZeroPhase:
      break;
    case PhaseModel::MinimumPhase:
      r.phase_.x = r.magnitude_.x;
      r.phase_.y = minimum_phase(r.magnitude_.x, r.magnitude_.y, padding_factor);
      break;
    case PhaseModel::ExplicitTable:
      if (!phase_table) throw InvalidArgument("explicit-table phase model needs a phase table");
      check_curve(*phase_table, "phase");
      r.phase_ = std::move(*phase_table);
      r.domain_max_ = std::min(r.domain_max_, symmetric_coverage(r.phase_));
      break;
  }
  if (!(r.domain_max_ >= 0.0)) throw InvalidArgument("magnitude table must cover the carrier");
  r.check_passivity();
  return r;
}

void FilterResponse::check_passivity() const {
  if (params_) {
    validate_lineshape(*params_, domain_max_);
    return;
  }
  for (std::size_t i = 0; i < magnitude_.y.size(); ++i) {
    const double t = magnitude_.y[i];
    if (!(t >= 0.0 && t <= 1.0)) {
      throw InvalidArgument("tabulated transmission outside [0, 1] at point " + std::to_string(i));
    }
  }
}

double FilterResponse::magnitude_at(double signed_omega) const {
  return params_ ? eval_lineshape(*params_, signed_omega) : magnitude_.at(signed_omega);
}

double FilterResponse::phase_at(double signed_omega) const {
  return model_ == PhaseModel::ZeroPhase ? 0.0 : phase_.at(signed_omega);
}

SidebandTransmission FilterResponse::at(double omega) const {
  if (!(omega >= 0.0) || omega > domain_max_) {
    throw InvalidArgument("sideband frequency " + std::to_string(omega) +
                          " Hz outside filter domain [0, " + std::to_string(domain_max_) + "]");
  }
  return {magnitude_at(omega), magnitude_at(-omega), phase_at(omega), phase_at(-omega)};
}

FilterResponse unit_filter() {
  return FilterResponse::from_lineshape({0.0, 0.0, 1.0, 1.0, 0.0}, PhaseModel::ZeroPhase);
}

}  // namespace sqzf
