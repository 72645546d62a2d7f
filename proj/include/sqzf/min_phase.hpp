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
#include <vector>

namespace sqzf {

// Minimum-phase completion of a measured transmission magnitude.
//
// `frequency` must be a uniform grid symmetric about the carrier and
// `magnitude` strictly positive. The phase is the Hilbert transform of
// ln|T| (e^{-i w t} field convention, so a transparency peak gives positive
// group delay). Before transforming, the log-magnitude is extended with its
// edge values until the padded grid spans `padding_factor` times the input
// span.
std::vector<double> minimum_phase(std::span<const double> frequency,
                                  std::span<const double> magnitude,
                                  double padding_factor = 4.0);

// Discrete Hilbert transform of a uniformly sampled real sequence,
// H{cos} = sin. Periodic in the sequence length.
std::vector<double> discrete_hilbert(std::span<const double> samples);

// Throws unless `frequency` is uniform (relative 1e-6) and symmetric about 0.
void check_symmetric_uniform(std::span<const double> frequency);

}  // namespace sqzf
