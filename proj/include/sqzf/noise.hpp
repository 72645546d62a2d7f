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

// Gaussian sideband-quadrature noise in the two-photon picture.
//
// A state at one sideband frequency is described by the symmetrized second
// moments of the amplitude (X+) and phase (X-) quadratures. Variances are
// normalized so that vacuum / shot noise is exactly 1.

#include <numbers>

namespace sqzf {

struct QuadratureCovariance {
  double v_plus = 1.0;
  double v_minus = 1.0;
  double c_cross = 0.0;

  double determinant() const { return v_plus * v_minus - c_cross * c_cross; }

  friend bool operator==(const QuadratureCovariance&, const QuadratureCovariance&) = default;
};

inline constexpr QuadratureCovariance kVacuum{1.0, 1.0, 0.0};

// True when v_plus*v_minus - c_cross^2 >= 1 - tol. Measured states may fail
// this (detector artifacts), so it is never enforced on construction.
bool is_physical(const QuadratureCovariance& cov, double tol = 1e-9);

// v_min/v_max are eigenvalues of the covariance; angle is the LO angle at
// which v_min is observed, kept in [0, pi).
struct SqueezeParams {
  double v_min = 1.0;
  double v_max = 1.0;
  double angle = 0.0;
};

// Complex amplitude transmission T+ e^{i Theta+} at +Omega and
// T- e^{i Theta-} at -Omega.
struct SidebandTransmission {
  double t_plus = 1.0;
  double t_minus = 1.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
};

// Throws InvalidArgument if either amplitude lies outside [0, 1].
void check_passive(const SidebandTransmission& t);

struct QuadratureExtremes {
  double theta_min = 0.0;
  double v_min = 1.0;
  double theta_max = std::numbers::pi / 2;
  double v_max = 1.0;
};

// Wraps an angle into [0, pi).
double normalize_angle(double angle);

// Shortest signed distance between two quadrature angles, modulo pi.
double angle_distance(double a, double b);

QuadratureCovariance make_covariance(const SqueezeParams& params);

// Loss-only transform for diagonal inputs:
//   V+out = A+^2 V+in + A-^2 V-in + 1 - (A+^2 + A-^2)
//   V-out = A-^2 V+in + A+^2 V-in + 1 - (A+^2 + A-^2)
// with A+- = (T+ +- T-)/2. Rejects inputs with c_cross != 0.
QuadratureCovariance eq4_propagate(double t_plus, double t_minus, const QuadratureCovariance& in);

// Squeezing-angle rotation produced by the sideband phases.
constexpr double rotation_angle(double theta_plus, double theta_minus) {
  return 0.5 * (theta_plus + theta_minus);
}

// R(phi) cov R(phi)^T with R the counter-clockwise rotation.
QuadratureCovariance apply_rotation(const QuadratureCovariance& cov, double phi);

// Full complex-sideband propagation. The common phase (Theta+ - Theta-)/2
// is a delay and drops out of the symmetrized moments; the remaining phase
// rotates the state by rotation_angle(), after which the sideband amplitudes
// mix X+ and X- and vacuum fills the absorbed fraction.
QuadratureCovariance general_propagate(const SidebandTransmission& t, const QuadratureCovariance& in);

// Variance seen by a homodyne detector with LO phase lo_angle.
double homodyne_variance(const QuadratureCovariance& cov, double lo_angle);

QuadratureExtremes min_max_quadratures(const QuadratureCovariance& cov);

double variance_to_db(double v);
double db_to_variance(double db);

}  // namespace sqzf
