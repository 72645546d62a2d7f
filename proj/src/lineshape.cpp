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


#include "sqzf/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqzf/error.hpp"

namespace sqzf {

namespace {

constexpr double kTraceSlack = 1e-6;

}  // namespace

double lineshape_formula(const LineshapeParams& p, double d) {
  const double x = d / p.gamma;
  const double den = 1.0 + x * x;
  return p.a_sym / den + p.b_asym * x / den + p.c_bg;
}

double eval_lineshape(const LineshapeParams& p, double delta) {
  return lineshape_formula(p, p.delta0 + delta);
}

std::pair<double, double> sideband_pair(const LineshapeParams& p, double omega) {
  return {lineshape_formula(p, p.delta0 + omega), lineshape_formula(p, p.delta0 - omega)};
}

std::pair<double, double> lineshape_range(const LineshapeParams& p, double lo, double hi) {
  double vmin = std::min(eval_lineshape(p, lo), eval_lineshape(p, hi));
  double vmax = std::max(eval_lineshape(p, lo), eval_lineshape(p, hi));
  // With x = d / G the derivative vanishes where B x^2 + 2 A x - B = 0.
  std::vector<double> roots;
  if (p.b_asym == 0.0) {
    roots.push_back(0.0);
  } else {
    const double r = std::hypot(p.a_sym, p.b_asym);
    roots.push_back((-p.a_sym + r) / p.b_asym);
    roots.push_back((-p.a_sym - r) / p.b_asym);
  }
  for (double x : roots) {
    const double delta = x * p.gamma - p.delta0;
    if (delta > lo && delta < hi) {
      const double v = eval_lineshape(p, delta);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  return {vmin, vmax};
}

void validate_lineshape(const LineshapeParams& p, double domain_hz) {
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
    throw InvalidArgument("lineshape gamma must be positive and finite");
  }
  if (!std::isfinite(p.a_sym) || !std::isfinite(p.b_asym) || !std::isfinite(p.c_bg) ||
      !std::isfinite(p.delta0)) {
    throw InvalidArgument("lineshape parameters must be finite");
  }
  double lo = -domain_hz;
  double hi = domain_hz;
  if (std::isinf(domain_hz)) {
    // Tails approach the background; bound with a generous finite span.
    lo = -1e6 * p.gamma - std::abs(p.delta0);
    hi = -lo;
    if (p.c_bg < 0.0 || p.c_bg > 1.0) {
      throw InvalidArgument("lineshape background outside [0, 1]");
    }
  }
  const auto [vmin, vmax] = lineshape_range(p, lo, hi);
  if (vmin < 0.0 || vmax > 1.0) {
    throw InvalidArgument("lineshape transmission leaves [0, 1] on the domain: range [" +
                          std::to_string(vmin) + ", " + std::to_string(vmax) + "]");
  }
}

void validate_trace(const TransmissionTrace& trace) {
  if (trace.detuning.size() != trace.transmission.size()) {
    throw InvalidArgument("trace detuning and transmission lengths differ");
  }
  if (trace.detuning.size() < 5) {
    throw InvalidArgument("trace needs at least 5 points, got " +
                          std::to_string(trace.detuning.size()));
  }
  for (std::size_t i = 0; i < trace.detuning.size(); ++i) {
    if (!std::isfinite(trace.detuning[i]) || !std::isfinite(trace.transmission[i])) {
      throw InvalidArgument("trace point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(trace.detuning[i] > trace.detuning[i - 1])) {
      throw InvalidArgument("trace detuning not strictly increasing at point " + std::to_string(i));
    }
    const double t = trace.transmission[i];
    if (t < -kTraceSlack || t > 1.0 + kTraceSlack) {
      throw InvalidArgument("trace transmission outside [0, 1] at point " + std::to_string(i));
    }
  }
}

TransmissionTrace to_amplitude(TransmissionTrace trace) {
  if (trace.kind == TraceKind::Intensity) {
    for (double& t : trace.transmission) t = std::sqrt(std::max(t, 0.0));
    trace.kind = TraceKind::Amplitude;
  }
  return trace;
}

TransmissionTrace synthesize_trace(const LineshapeParams& p, std::span<const double> detuning) {
  TransmissionTrace trace;
  trace.detuning.assign(detuning.begin(), detuning.end());
  trace.transmission.reserve(detuning.size());
  for (double d : detuning) trace.transmission.push_back(eval_lineshape(p, d));
  return trace;
}

}  // namespace sqzf
