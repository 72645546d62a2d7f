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


#include "sqzf/min_phase.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "sqzf/error.hpp"

namespace sqzf {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

std::vector<double> discrete_hilbert(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) return std::vector<double>(samples.size(), 0.0);
  std::vector<double> buf(samples.begin(), samples.end());
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(n / 2 + 1));
  auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());

  Plan forward;
  Plan backward;
  {
    std::lock_guard lock(planner_mutex());
    forward.reset(fftw_plan_dft_r2c_1d(n, buf.data(), spec_ptr, FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_c2r_1d(n, spec_ptr, buf.data(), FFTW_ESTIMATE));
  }
  fftw_execute(forward.get());
  // Multiply by -i sgn(k); DC and (for even n) Nyquist are zeroed.
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    spec[k] = std::complex<double>(spec[k].imag(), -spec[k].real());
  }
  if (n % 2 == 0) spec.back() = 0.0;
  fftw_execute(backward.get());
  for (double& v : buf) v /= n;
  return buf;
}

void check_symmetric_uniform(std::span<const double> frequency) {
  const std::size_t n = frequency.size();
  if (n < 3) throw InvalidArgument("phase reconstruction needs at least 3 grid points");
  const double step = (frequency.back() - frequency.front()) / static_cast<double>(n - 1);
  if (!(step > 0.0)) throw InvalidArgument("frequency grid must be increasing");
  const double tol = 1e-6 * step;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(frequency[i] - frequency[i - 1] - step) > tol) {
      throw InvalidArgument("frequency grid is not uniform near point " + std::to_string(i) +
                            "; resample onto a uniform grid first");
    }
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (std::abs(frequency[i] + frequency[n - 1 - i]) > tol) {
      throw InvalidArgument("frequency grid is not symmetric about the carrier; resample first");
    }
  }
}

std::vector<double> minimum_phase(std::span<const double> frequency, std::span<const double> magnitude,
                                  double padding_factor) {
  if (frequency.size() != magnitude.size()) {
    throw InvalidArgument("frequency and magnitude lengths differ");
  }
  check_symmetric_uniform(frequency);
  if (!(padding_factor >= 1.0)) throw InvalidArgument("padding factor must be >= 1");
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (!(magnitude[i] > 0.0)) {
      throw NumericalError("magnitude must be strictly positive for log-phase reconstruction (point " +
                           std::to_string(i) + ")");
    }
  }

  const std::size_t n = magnitude.size();
  const auto pad = static_cast<std::size_t>(std::ceil(0.5 * (padding_factor - 1.0) * static_cast<double>(n)));
  std::vector<double> log_mag(n + 2 * pad);
  const double left = std::log(magnitude.front());
  const double right = std::log(magnitude.back());
  for (std::size_t i = 0; i < pad; ++i) {
    log_mag[i] = left;
    log_mag[pad + n + i] = right;
  }
  for (std::size_t i = 0; i < n; ++i) log_mag[pad + i] = std::log(magnitude[i]);

  const std::vector<double> h = discrete_hilbert(log_mag);
  return {h.begin() + static_cast<std::ptrdiff_t>(pad), h.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace sqzf
