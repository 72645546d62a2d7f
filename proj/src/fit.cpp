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


#include "sqzf/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sqzf {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Internal coordinates: detuning scaled by `scale`, gamma as log.
struct Problem {
  const TransmissionTrace& trace;
  double scale;

  LineshapeParams to_params(const Vec5& x) const {
    return {x(0), x(1), x(2), scale * std::exp(x(3)), scale * x(4)};
  }

  static Vec5 from_params(const LineshapeParams& p, double scale) {
    Vec5 x;
    x << p.a_sym, p.b_asym, p.c_bg, std::log(p.gamma / scale), p.delta0 / scale;
    return x;
  }

  double ssr(const Vec5& x) const {
    const double g = std::exp(x(3));
    double acc = 0.0;
    for (std::size_t i = 0; i < trace.detuning.size(); ++i) {
      const double d = trace.detuning[i] / scale + x(4);
      const double den = g * g + d * d;
      const double r = (x(0) * g * g + x(1) * g * d) / den + x(2) - trace.transmission[i];
      acc += r * r;
    }
    return acc;
  }

  // Accumulates J^T J and J^T r.
  void normal_equations(const Vec5& x, Mat5& jtj, Vec5& jtr) const {
    jtj.setZero();
    jtr.setZero();
    const double g = std::exp(x(3));
    const double a = x(0);
    const double b = x(1);
    for (std::size_t i = 0; i < trace.detuning.size(); ++i) {
      const double d = trace.detuning[i] / scale + x(4);
      const double den = g * g + d * d;
      const double num = a * g * g + b * g * d;
      const double r = num / den + x(2) - trace.transmission[i];
      Vec5 j;
      j(0) = g * g / den;
      j(1) = g * d / den;
      j(2) = 1.0;
      j(3) = g * ((2.0 * a * g + b * d) * den - num * 2.0 * g) / (den * den);
      j(4) = (b * g * den - num * 2.0 * d) / (den * den);
      jtj.noalias() += j * j.transpose();
      jtr.noalias() += j * r;
    }
  }
};

double half_width_guess(const TransmissionTrace& trace, std::size_t peak, double level) {
  const auto& x = trace.detuning;
  const auto& y = trace.transmission;
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = peak; i > 0; --i) {
    if (y[i - 1] <= level) {
      const double f = (y[i] - level) / (y[i] - y[i - 1]);
      left = x[i] - f * (x[i] - x[i - 1]);
      break;
    }
  }
  for (std::size_t i = peak; i + 1 < x.size(); ++i) {
    if (y[i + 1] <= level) {
      const double f = (y[i] - level) / (y[i] - y[i + 1]);
      right = x[i] + f * (x[i + 1] - x[i]);
      break;
    }
  }
  const double centre = x[peak];
  if (std::isfinite(left) && std::isfinite(right)) return 0.5 * (right - left);
  if (std::isfinite(left)) return centre - left;
  if (std::isfinite(right)) return right - centre;
  return 0.25 * (x.back() - x.front());
}

void fill_std_errors(const Problem& prob, const Vec5& x, FitDiagnostics& diag) {
  const auto n = static_cast<double>(prob.trace.detuning.size());
  diag.std_error.fill(0.0);
  if (n <= 5.0) return;
  Mat5 jtj;
  Vec5 jtr;
  prob.normal_equations(x, jtj, jtr);
  Eigen::FullPivLU<Mat5> lu(jtj);
  if (!lu.isInvertible()) return;
  const Mat5 cov = lu.inverse() * (diag.ssr / (n - 5.0));
  const double gamma = prob.scale * std::exp(x(3));
  diag.std_error[0] = std::sqrt(std::max(cov(0, 0), 0.0));
  diag.std_error[1] = std::sqrt(std::max(cov(1, 1), 0.0));
  diag.std_error[2] = std::sqrt(std::max(cov(2, 2), 0.0));
  diag.std_error[3] = gamma * std::sqrt(std::max(cov(3, 3), 0.0));
  diag.std_error[4] = prob.scale * std::sqrt(std::max(cov(4, 4), 0.0));
}

}  // namespace

LineshapeParams initial_guess(const TransmissionTrace& trace) {
  const auto& y = trace.transmission;
  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  const auto peak = static_cast<std::size_t>(max_it - y.begin());
  const double lo = *min_it;
  const double hi = *max_it;
  LineshapeParams p;
  p.c_bg = lo;
  p.a_sym = hi - lo;
  p.b_asym = 0.0;
  // eval_lineshape peaks where delta0 + delta = 0.
  p.delta0 = -trace.detuning[peak];
  p.gamma = half_width_guess(trace, peak, 0.5 * (hi + lo));
  if (!(p.gamma > 0.0)) p.gamma = 0.25 * (trace.detuning.back() - trace.detuning.front());
  return p;
}

FitResult fit_lineshape(const TransmissionTrace& trace, const std::optional<LineshapeParams>& init,
                        const FitOptions& options) {
  validate_trace(trace);
  const auto [min_it, max_it] = std::minmax_element(trace.transmission.begin(), trace.transmission.end());
  if (*max_it - *min_it < 1e-9) {
    FitResult best;
    best.params.c_bg = *min_it;
    best.diagnostics.message = "unidentifiable gamma: trace has no resonance (constant transmission)";
    throw FitError(FitFailure::Unidentifiable, best, best.diagnostics.message);
  }

  const LineshapeParams start = init.value_or(initial_guess(trace));
  if (!(start.gamma > 0.0)) throw InvalidArgument("initial gamma must be positive");
  const Problem prob{trace, start.gamma};
  Vec5 x = Problem::from_params(start, prob.scale);
  double cost = prob.ssr(x);
  if (!std::isfinite(cost)) throw InvalidArgument("initial lineshape parameters give non-finite residuals");

  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  std::string message;
  const double tiny = 1e-30 * static_cast<double>(trace.detuning.size());

  Mat5 jtj;
  Vec5 jtr;
  prob.normal_equations(x, jtj, jtr);
  while (iter < options.max_iterations) {
    ++iter;
    Mat5 damped = jtj;
    for (int k = 0; k < 5; ++k) damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
    const Vec5 step = damped.ldlt().solve(-jtr);
    const Vec5 trial = x + step;
    const double trial_cost = step.allFinite() ? prob.ssr(trial) : std::numeric_limits<double>::infinity();

    if (std::isfinite(trial_cost) && trial_cost < cost) {
      const double drop = cost - trial_cost;
      x = trial;
      const double old = cost;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-12);
      if (options.on_accept) options.on_accept(iter, cost);
      if (drop <= options.relative_tolerance * old || cost <= tiny) {
        converged = true;
        message = "relative residual change below tolerance";
        break;
      }
      prob.normal_equations(x, jtj, jtr);
    } else {
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No direction lowers the residual any more: stationary point.
        converged = true;
        message = "stationary point reached";
        break;
      }
    }
  }

  FitResult result;
  result.params = prob.to_params(x);
  result.diagnostics.iterations = iter;
  result.diagnostics.ssr = cost;
  result.diagnostics.residual_rms = std::sqrt(cost / static_cast<double>(trace.detuning.size()));
  result.diagnostics.converged = converged;
  result.diagnostics.message = converged ? message : "iteration cap reached";
  fill_std_errors(prob, x, result.diagnostics);

  if (!converged) {
    throw FitError(FitFailure::NonConvergence, result,
                   "lineshape fit did not converge in " + std::to_string(options.max_iterations) +
                       " iterations (best rms " + std::to_string(result.diagnostics.residual_rms) + ")");
  }
  const auto [vmin, vmax] =
      lineshape_range(result.params, trace.detuning.front(), trace.detuning.back());
  if (vmin < -1e-6 || vmax > 1.0 + 1e-6) {
    result.diagnostics.message = "fitted transmission leaves [0, 1] on the trace domain";
    throw FitError(FitFailure::OutOfRange, result, result.diagnostics.message);
  }
  return result;
}

}  // namespace sqzf
