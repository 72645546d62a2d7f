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

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "sqzf/error.hpp"
#include "sqzf/lineshape.hpp"

namespace sqzf {

struct FitOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  // Called with (iteration, ssr) after every accepted step.
  std::function<void(int, double)> on_accept;
};

struct FitDiagnostics {
  bool converged = false;
  int iterations = 0;
  double ssr = 0.0;
  double residual_rms = 0.0;
  // One-sigma estimates for (A, B, C, gamma, delta0), from the Gauss-Newton
  // curvature at the solution. Zero when the trace has no spare dof.
  std::array<double, 5> std_error{};
  std::string message;
};

struct FitResult {
  LineshapeParams params;
  FitDiagnostics diagnostics;
};

enum class FitFailure { NonConvergence, Unidentifiable, OutOfRange };

// Fit failure; carries the best parameters seen so far.
class FitError : public NumericalError {
 public:
  FitError(FitFailure reason, FitResult best, const std::string& what)
      : NumericalError(what), reason_(reason), best_(std::move(best)) {}

  FitFailure reason() const { return reason_; }
  const FitResult& best() const { return best_; }

 private:
  FitFailure reason_;
  FitResult best_;
};

// Starting point derived from the trace shape: background from the minimum,
// amplitude from the contrast, centre from the peak, width from the
// half-contrast crossings, no asymmetry.
LineshapeParams initial_guess(const TransmissionTrace& trace);

// Levenberg-Marquardt least squares of eval_lineshape against the trace.
// The trace is used as stored (call to_amplitude first for intensity data).
// gamma is fitted through its logarithm so it stays positive.
FitResult fit_lineshape(const TransmissionTrace& trace,
                        const std::optional<LineshapeParams>& init = std::nullopt,
                        const FitOptions& options = {});

}  // namespace sqzf
