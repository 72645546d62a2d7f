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


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "scenario_kernels.hpp"
#include "sqzf/error.hpp"

namespace sqzf {

FrequencyGrid FrequencyGrid::linspace(double start_hz, double stop_hz, int count) {
  if (count < 1) throw InvalidArgument("frequency grid needs at least one point");
  FrequencyGrid g;
  g.points.resize(static_cast<std::size_t>(count));
  if (count == 1) {
    g.points[0] = start_hz;
  } else {
    const double step = (stop_hz - start_hz) / (count - 1);
    for (int i = 0; i < count; ++i) g.points[static_cast<std::size_t>(i)] = start_hz + i * step;
    g.points.back() = stop_hz;
  }
  g.validate();
  return g;
}

void FrequencyGrid::validate() const {
  if (points.empty()) throw InvalidArgument("frequency grid is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0) || !std::isfinite(points[i])) {
      throw InvalidArgument("frequency grid point " + std::to_string(i) + " must be positive");
    }
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw InvalidArgument("frequency grid must be strictly increasing (point " + std::to_string(i) + ")");
    }
  }
}

InputNoiseSpec InputNoiseSpec::constant(const SqueezeParams& params) {
  make_covariance(params);  // validates
  InputNoiseSpec s;
  s.constant_ = SqueezeParams{params.v_min, params.v_max, normalize_angle(params.angle)};
  return s;
}

InputNoiseSpec InputNoiseSpec::constant_db(double v_min_db, double v_max_db, double angle) {
  return constant({db_to_variance(v_min_db), db_to_variance(v_max_db), angle});
}

InputNoiseSpec InputNoiseSpec::table(std::vector<double> frequency, std::vector<double> v_min_db,
                                     std::vector<double> v_max_db, std::vector<double> angle) {
  const std::size_t n = frequency.size();
  if (n < 2 || v_min_db.size() != n || v_max_db.size() != n || angle.size() != n) {
    throw InvalidArgument("input noise table needs >= 2 rows with matching columns");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(frequency[i] > frequency[i - 1])) {
      throw InvalidArgument("input noise table frequencies must be strictly increasing");
    }
    if (!(v_min_db[i] <= v_max_db[i])) {
      throw InvalidArgument("input noise table row " + std::to_string(i) + " has v_min_db > v_max_db");
    }
  }
  InputNoiseSpec s;
  s.min_db_ = {frequency, std::move(v_min_db)};
  s.max_db_ = {frequency, std::move(v_max_db)};
  s.angle_ = {std::move(frequency), std::move(angle)};
  return s;
}

SqueezeParams InputNoiseSpec::at(double omega) const {
  if (constant_) return *constant_;
  // Linear interpolation keeps v_min_db <= v_max_db between valid rows.
  return {db_to_variance(min_db_.at(omega)), db_to_variance(max_db_.at(omega)),
          normalize_angle(angle_.at(omega))};
}

void InputNoiseSpec::check_covers(const FrequencyGrid& grid) const {
  if (constant_) return;
  if (grid.points.front() < min_db_.x.front() || grid.points.back() > min_db_.x.back()) {
    throw InvalidArgument("input noise table does not cover the frequency grid");
  }
}

std::string to_string(LoKind k) {
  switch (k) {
    case LoKind::FixedAngle: return "fixed-angle";
    case LoKind::TrackMinimum: return "track-minimum";
    case LoKind::TrackMaximum: return "track-maximum";
    case LoKind::Scan: return "scan";
  }
  return "?";
}

LoKind parse_lo_kind(const std::string& s) {
  if (s == "fixed-angle") return LoKind::FixedAngle;
  if (s == "track-minimum") return LoKind::TrackMinimum;
  if (s == "track-maximum") return LoKind::TrackMaximum;
  if (s == "scan") return LoKind::Scan;
  throw InvalidArgument("unknown LO strategy '" + s + "'");
}

void validate_config(const ScenarioConfig& config) {
  config.grid.validate();
  if (config.grid.points.back() > config.filter.domain_max()) {
    throw InvalidArgument("frequency grid extends past the filter domain (" +
                          std::to_string(config.filter.domain_max()) + " Hz)");
  }
  config.input.check_covers(config.grid);
}

PointState evaluate_point(const ScenarioConfig& config, double omega) {
  PointState s;
  s.input = config.input.at(omega);
  s.output = general_propagate(config.filter.at(omega), make_covariance(s.input));
  return s;
}

namespace detail {

namespace {

std::vector<bool> validity_mask(const ScenarioConfig& config) {
  if (config.excluded_hz.empty()) return {};
  std::vector<bool> mask(config.grid.points.size(), true);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double f = config.grid.points[i];
    for (const auto& [lo, hi] : config.excluded_hz) {
      if (f >= lo && f <= hi) mask[i] = false;
    }
  }
  return mask;
}

NoiseSpectrum make_spectrum(const ScenarioConfig& config, std::vector<double>&& db, std::string label,
                            std::string strategy, bool masked) {
  NoiseSpectrum s;
  s.frequencies = config.grid.points;
  s.noise_db = std::move(db);
  if (masked) s.valid = validity_mask(config);
  s.label = std::move(label);
  s.lo_strategy = std::move(strategy);
  return s;
}

std::string anchor_label(double anchor_hz) {
  std::ostringstream os;
  os << "LO fixed at min. noise angle of " << anchor_hz / 1e6 << " MHz";
  return os.str();
}

}  // namespace

void family_point(const ScenarioConfig& config, std::size_t i, FamilyBuffers& buf) {
  const PointState s = evaluate_point(config, config.grid.points[i]);
  const QuadratureExtremes ext = min_max_quadratures(s.output);
  buf.in_max[i] = variance_to_db(s.input.v_max);
  buf.in_min[i] = variance_to_db(s.input.v_min);
  buf.out_max[i] = variance_to_db(ext.v_max);
  buf.out_min[i] = variance_to_db(ext.v_min);
  switch (config.lo.kind) {
    case LoKind::FixedAngle:
      buf.lo[i] = variance_to_db(homodyne_variance(s.output, config.lo.angle));
      break;
    case LoKind::TrackMinimum:
      buf.lo[i] = buf.out_min[i];
      break;
    case LoKind::TrackMaximum:
      buf.lo[i] = buf.out_max[i];
      break;
    case LoKind::Scan:
      break;
  }
}

SpectrumFamily assemble_family(const ScenarioConfig& config, FamilyBuffers&& buf) {
  SpectrumFamily f;
  f.input_max = make_spectrum(config, std::move(buf.in_max), "input max. noise", "track-maximum", false);
  f.input_min = make_spectrum(config, std::move(buf.in_min), "input min. noise", "track-minimum", false);
  f.output_max = make_spectrum(config, std::move(buf.out_max), "expected max. noise", "track-maximum", true);
  f.output_min = make_spectrum(config, std::move(buf.out_min), "expected min. noise", "track-minimum", true);
  if (config.lo.kind != LoKind::Scan) {
    f.lo = make_spectrum(config, std::move(buf.lo), "expected noise, " + to_string(config.lo.kind),
                         to_string(config.lo.kind), true);
  }
  return f;
}

std::vector<double> scan_angles(int theta_samples) {
  if (theta_samples < 8) throw InvalidArgument("phase scan needs at least 8 LO angles");
  std::vector<double> thetas(static_cast<std::size_t>(theta_samples));
  for (int j = 0; j < theta_samples; ++j) {
    thetas[static_cast<std::size_t>(j)] = std::numbers::pi * j / theta_samples;
  }
  return thetas;
}

void scan_point(const ScenarioConfig& config, const std::vector<double>& thetas, std::size_t i,
                std::vector<double>& surface, std::vector<double>& env_min, std::vector<double>& env_max) {
  const std::size_t nf = config.grid.points.size();
  const QuadratureCovariance out = evaluate_point(config, config.grid.points[i]).output;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const double db = variance_to_db(homodyne_variance(out, thetas[j]));
    surface[j * nf + i] = db;
    lo = std::min(lo, db);
    hi = std::max(hi, db);
  }
  env_min[i] = lo;
  env_max[i] = hi;
}

PhaseScanResult assemble_scan(const ScenarioConfig& config, std::vector<double>&& thetas,
                              std::vector<double>&& surface, std::vector<double>&& env_min,
                              std::vector<double>&& env_max) {
  PhaseScanResult r;
  r.thetas = std::move(thetas);
  r.frequencies = config.grid.points;
  r.noise_db = std::move(surface);
  r.envelope_min = make_spectrum(config, std::move(env_min), "scan envelope min", "scan", true);
  r.envelope_max = make_spectrum(config, std::move(env_max), "scan envelope max", "scan", true);
  return r;
}

std::vector<double> anchor_angles(const ScenarioConfig& config) {
  if (config.filter.phase_model() == PhaseModel::ZeroPhase) {
    throw InvalidArgument("angle tracking needs a filter phase model; a zero-phase filter cannot rotate "
                          "the squeezing angle (use predict_spectrum)");
  }
  std::vector<double> thetas;
  thetas.reserve(config.lo.anchors_hz.size());
  for (double a : config.lo.anchors_hz) {
    if (!(a > 0.0) || a > config.filter.domain_max()) {
      throw InvalidArgument("anchor frequency " + std::to_string(a) + " Hz outside the filter domain");
    }
    thetas.push_back(min_max_quadratures(evaluate_point(config, a).output).theta_min);
  }
  return thetas;
}

void tracking_point(const ScenarioConfig& config, const std::vector<double>& anchor_theta, std::size_t i,
                    TrackingBuffers& buf) {
  const QuadratureCovariance out = evaluate_point(config, config.grid.points[i]).output;
  const QuadratureExtremes ext = min_max_quadratures(out);
  buf.theta_star[i] = ext.theta_min;
  buf.tracked_min[i] = variance_to_db(ext.v_min);
  for (std::size_t a = 0; a < anchor_theta.size(); ++a) {
    buf.anchor_db[a][i] = variance_to_db(homodyne_variance(out, anchor_theta[a]));
  }
}

AngleTrackingResult assemble_tracking(const ScenarioConfig& config, const std::vector<double>& anchor_theta,
                                      TrackingBuffers&& buf) {
  AngleTrackingResult r;
  r.frequencies = config.grid.points;
  r.theta_star = std::move(buf.theta_star);
  r.tracked_min = make_spectrum(config, std::move(buf.tracked_min), "tracked min. noise", "track-minimum", true);
  for (std::size_t a = 0; a < anchor_theta.size(); ++a) {
    AnchorSpectrum s;
    s.anchor_hz = config.lo.anchors_hz[a];
    s.theta = anchor_theta[a];
    s.spectrum = make_spectrum(config, std::move(buf.anchor_db[a]),
                               anchor_label(s.anchor_hz),
                               "fixed-angle", true);
    r.anchors.push_back(std::move(s));
  }
  return r;
}

}  // namespace detail

}  // namespace sqzf
