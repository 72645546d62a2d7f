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

#include <span>
#include <utility>
#include <vector>

namespace sqzf {

// Empirical EIT transmission window: symmetric plus antisymmetric Lorentzian
// on a constant background. Frequencies in Hz.
struct LineshapeParams {
  double a_sym = 0.0;
  double b_asym = 0.0;
  double c_bg = 0.0;
  double gamma = 1.0;   // HWHM
  double delta0 = 0.0;  // resonance offset from the squeezed carrier
};

enum class TraceKind { Amplitude, Intensity };

// Transmission versus two-photon detuning, measured relative to the fixed
// operating point, so detuning +x probes the same transmission as the +x
// sideband.
struct TransmissionTrace {
  std::vector<double> detuning;
  std::vector<double> transmission;
  TraceKind kind = TraceKind::Amplitude;
};

// Raw lineshape formula evaluated at offset d from the resonance centre:
//   A G^2/(G^2 + d^2) + B G d/(G^2 + d^2) + C
double lineshape_formula(const LineshapeParams& p, double d);

// Transmission at trace detuning delta, i.e. lineshape_formula(delta0 + delta).
double eval_lineshape(const LineshapeParams& p, double delta);

// (T+, T-) = (formula(delta0 + omega), formula(delta0 - omega)).
std::pair<double, double> sideband_pair(const LineshapeParams& p, double omega);

// Exact min/max of eval_lineshape over detuning in [lo, hi], using the
// closed-form stationary points of the formula.
std::pair<double, double> lineshape_range(const LineshapeParams& p, double lo, double hi);

// Throws InvalidArgument unless gamma > 0 and transmission stays inside
// [0, 1] for every |delta| <= domain_hz.
void validate_lineshape(const LineshapeParams& p, double domain_hz);

// Throws InvalidArgument on length mismatch, fewer than 5 points,
// non-increasing detuning or transmission outside [0, 1] (+1e-6 slack).
void validate_trace(const TransmissionTrace& trace);

// Amplitude-calibrated copy; intensity traces are square-rooted.
TransmissionTrace to_amplitude(TransmissionTrace trace);

// Samples eval_lineshape on the given detunings.
TransmissionTrace synthesize_trace(const LineshapeParams& p, std::span<const double> detuning);

}  // namespace sqzf
