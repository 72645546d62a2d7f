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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sqzf/fit.hpp"
#include "sqzf/lineshape.hpp"
#include "sqzf/scenario.hpp"

namespace sqzf::io {

namespace fs = std::filesystem;

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

// Delimited text with a header row; '#' lines and blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> line_numbers;        // 1-based source line of each row
  std::vector<std::string> comments;    // comment text without the leading '#'

  // Index of a column, or -1.
  int column(const std::string& name) const;
};

CsvTable read_csv(const fs::path& path);

// TraceFile: detuning_hz, transmission. Errors name the offending line.
// Intensity traces are converted to amplitude.
TransmissionTrace ingest_trace(const fs::path& path, TraceKind kind = TraceKind::Amplitude);
void write_trace(const fs::path& path, const TransmissionTrace& trace);

// SpectrumFile: frequency_hz, noise_db, optional valid (0/1).
NoiseSpectrum read_spectrum(const fs::path& path);
void write_spectrum(const fs::path& path, const NoiseSpectrum& spectrum);

// frequency_hz, theta_rad
SampledCurve read_phase_table(const fs::path& path);
void write_phase_table(const fs::path& path, const std::vector<double>& frequency,
                       const std::vector<double>& theta);

// theta_rad, frequency_hz, noise_db; one row per surface point.
void write_surface(const fs::path& path, const PhaseScanResult& scan);

// frequency_hz, v_min_db, v_max_db, angle_rad
InputNoiseSpec read_input_table(const fs::path& path);

nlohmann::json params_to_json(const LineshapeParams& p);
// Strict: exactly the five lineshape keys. `where` prefixes error messages.
LineshapeParams params_from_json(const nlohmann::json& j, const std::string& where = "$");
nlohmann::json fit_to_json(const FitResult& fit);

struct OutputSpec {
  fs::path dir = ".";
  std::string prefix;
};

struct Overlays {
  std::optional<NoiseSpectrum> measured_max;
  std::optional<NoiseSpectrum> measured_min;
};

struct LoadedConfig {
  ScenarioConfig scenario;
  OutputSpec output;
  Overlays overlays;
  nlohmann::json metadata;
  // Present when the filter was fitted from a trace file.
  std::optional<FitResult> fit;
};

// Parses and schema-checks a ConfigFile. Relative input paths resolve
// against the config file's directory; output.dir against the working
// directory. Unknown keys are rejected with their JSON path.
LoadedConfig load_config(const fs::path& path);
LoadedConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir);

void write_json(const fs::path& path, const nlohmann::json& doc);

}  // namespace sqzf::io
