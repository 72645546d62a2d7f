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

// Noise-spectrum predictions for squeezed vacuum sent through a filter.
//
// Every grid frequency is evaluated independently. The functions in
// namespace sqzf run the frequency loop with OpenMP; sqzf::serial holds the
// plain-loop reference used by the tests and benchmarks. Both call the same
// pointwise kernel, so their outputs are bit-identical.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqzf/filter.hpp"
#include "sqzf/noise.hpp"

namespace sqzf {

struct FrequencyGrid {
  std::vector<double> points;  // Hz, strictly increasing, > 0

  static FrequencyGrid linspace(double start_hz, double stop_hz, int count);
  void validate() const;
};

// Input squeezing: constant, or tabulated per frequency (dB values,
// linearly interpolated).
class InputNoiseSpec {
 public:
  static InputNoiseSpec constant(const SqueezeParams& params);
  static InputNoiseSpec constant_db(double v_min_db, double v_max_db, double angle);
  static InputNoiseSpec table(std::vector<double> frequency, std::vector<double> v_min_db,
                              std::vector<double> v_max_db, std::vector<double> angle);

  SqueezeParams at(double omega) const;
  // Throws InvalidArgument if any grid point is out of range.
  void check_covers(const FrequencyGrid& grid) const;

 private:
  std::optional<SqueezeParams> constant_;
  SampledCurve min_db_;
  SampledCurve max_db_;
  SampledCurve angle_;
};

enum class LoKind { FixedAngle, TrackMinimum, TrackMaximum, Scan };

std::string to_string(LoKind k);
LoKind parse_lo_kind(const std::string& s);

struct LoStrategy {
  LoKind kind = LoKind::TrackMinimum;
  double angle = 0.0;               // FixedAngle
  std::vector<double> anchors_hz;   // angle tracking
  int theta_samples = 64;           // Scan
};

struct NoiseSpectrum {
  std::vector<double> frequencies;
  std::vector<double> noise_db;
  std::vector<bool> valid;  // empty means every point valid
  std::string label;
  std::string lo_strategy;
};

struct ScenarioConfig {
  InputNoiseSpec input;
  FilterResponse filter;
  FrequencyGrid grid;
  LoStrategy lo;
  // Points inside these [lo, hi] bands are marked invalid in exports.
  std::vector<std::pair<double, double>> excluded_hz;
  std::string metadata;
};

// Throws InvalidArgument when the grid is malformed, leaves the filter
// domain, or the input table does not cover it.
void validate_config(const ScenarioConfig& config);

// Input and output state at one sideband frequency.
struct PointState {
  SqueezeParams input;
  QuadratureCovariance output;
};

PointState evaluate_point(const ScenarioConfig& config, double omega);

struct SpectrumFamily {
  NoiseSpectrum input_max;
  NoiseSpectrum input_min;
  NoiseSpectrum output_max;
  NoiseSpectrum output_min;
  // Spectrum for the configured LO strategy; absent for Scan.
  std::optional<NoiseSpectrum> lo;
};

struct PhaseScanResult {
  std::vector<double> thetas;
  std::vector<double> frequencies;
  std::vector<double> noise_db;  // row-major, thetas.size() x frequencies.size()
  NoiseSpectrum envelope_min;
  NoiseSpectrum envelope_max;

  double at(std::size_t theta_index, std::size_t freq_index) const {
    return noise_db[theta_index * frequencies.size() + freq_index];
  }
};

struct AnchorSpectrum {
  double anchor_hz = 0.0;
  double theta = 0.0;
  NoiseSpectrum spectrum;
};

struct AngleTrackingResult {
  std::vector<double> frequencies;
  std::vector<double> theta_star;  // [0, pi)
  NoiseSpectrum tracked_min;
  std::vector<AnchorSpectrum> anchors;
};

SpectrumFamily predict_spectrum(const ScenarioConfig& config);
PhaseScanResult phase_scan(const ScenarioConfig& config, int theta_samples);
AngleTrackingResult angle_tracking(const ScenarioConfig& config);

namespace serial {

SpectrumFamily predict_spectrum(const ScenarioConfig& config);
PhaseScanResult phase_scan(const ScenarioConfig& config, int theta_samples);
AngleTrackingResult angle_tracking(const ScenarioConfig& config);

}  // namespace serial

}  // namespace sqzf
