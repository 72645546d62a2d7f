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


#include "sqzf/noise.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "sqzf/error.hpp"

namespace sqzf {

namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

}  // namespace

bool is_physical(const QuadratureCovariance& cov, double tol) {
  return cov.v_plus > 0.0 && cov.v_minus > 0.0 && cov.determinant() >= 1.0 - tol;
}

void check_passive(const SidebandTransmission& t) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(t.t_plus) || !in_unit(t.t_minus)) {
    throw InvalidArgument("sideband amplitude transmission outside [0, 1]: T+=" +
                          std::to_string(t.t_plus) + " T-=" + std::to_string(t.t_minus));
  }
}

double normalize_angle(double angle) {
  double a = std::fmod(angle, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a = 0.0;
  return a;
}

double angle_distance(double a, double b) {
  double d = std::fmod(a - b, kPi);
  if (d > kPi / 2) d -= kPi;
  if (d < -kPi / 2) d += kPi;
  return d;
}

QuadratureCovariance make_covariance(const SqueezeParams& params) {
  if (!(params.v_min > 0.0) || !(params.v_max > 0.0)) {
    throw InvalidArgument("squeeze variances must be positive");
  }
  if (params.v_min > params.v_max) {
    throw InvalidArgument("squeeze parameters require v_min <= v_max");
  }
  return apply_rotation({params.v_min, params.v_max, 0.0}, params.angle);
}

QuadratureCovariance eq4_propagate(double t_plus, double t_minus, const QuadratureCovariance& in) {
  check_passive({t_plus, t_minus, 0.0, 0.0});
  if (in.c_cross != 0.0) {
    throw InvalidArgument("eq4_propagate needs a diagonal covariance; use general_propagate");
  }
  const double a_p = 0.5 * (t_plus + t_minus);
  const double a_m = 0.5 * (t_plus - t_minus);
  const double a_p2 = a_p * a_p;
  const double a_m2 = a_m * a_m;
  const double vacuum = 1.0 - (a_p2 + a_m2);
  return {a_p2 * in.v_plus + a_m2 * in.v_minus + vacuum,
          a_m2 * in.v_plus + a_p2 * in.v_minus + vacuum, 0.0};
}

QuadratureCovariance apply_rotation(const QuadratureCovariance& cov, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double c2 = c * c;
  const double s2 = s * s;
  const double cs = c * s;
  return {c2 * cov.v_plus + s2 * cov.v_minus - 2.0 * cs * cov.c_cross,
          s2 * cov.v_plus + c2 * cov.v_minus + 2.0 * cs * cov.c_cross,
          cs * (cov.v_plus - cov.v_minus) + (c2 - s2) * cov.c_cross};
}

QuadratureCovariance general_propagate(const SidebandTransmission& t, const QuadratureCovariance& in) {
  check_passive(t);
  // X_out = K X_in + vacuum, with K = [[p, i q], [-i q, p]],
  // p = (tau+ + conj(tau-))/2, q = (tau+ - conj(tau-))/2.
  const cplx tau_p = std::polar(t.t_plus, t.theta_plus);
  const cplx tau_m_conj = std::conj(std::polar(t.t_minus, t.theta_minus));
  const cplx p = 0.5 * (tau_p + tau_m_conj);
  const cplx q = 0.5 * (tau_p - tau_m_conj);
  const cplx i{0.0, 1.0};
  const cplx k[2][2] = {{p, i * q}, {-i * q, p}};

  // Re(K K^dagger) = (T+^2 + T-^2)/2 * I, so propagating the excess over
  // vacuum and adding 1 back carries the vacuum-replacement term exactly.
  const double e[2][2] = {{in.v_plus - 1.0, in.c_cross}, {in.c_cross, in.v_minus - 1.0}};
  double out[2][2] = {};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      cplx acc{};
      for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
          acc += k[r][m] * e[m][n] * std::conj(k[c][n]);
        }
      }
      out[r][c] = acc.real();
    }
  }
  return {1.0 + out[0][0], 1.0 + out[1][1], 0.5 * (out[0][1] + out[1][0])};
}

double homodyne_variance(const QuadratureCovariance& cov, double lo_angle) {
  const double c = std::cos(lo_angle);
  const double s = std::sin(lo_angle);
  return c * c * cov.v_plus + s * s * cov.v_minus + 2.0 * s * c * cov.c_cross;
}

QuadratureExtremes min_max_quadratures(const QuadratureCovariance& cov) {
  const double mean = 0.5 * (cov.v_plus + cov.v_minus);
  const double half_diff = 0.5 * (cov.v_plus - cov.v_minus);
  const double radius = std::hypot(half_diff, cov.c_cross);
  QuadratureExtremes out;
  out.v_min = mean - radius;
  out.v_max = mean + radius;
  if (radius == 0.0) {
    out.theta_min = 0.0;
    out.theta_max = kPi / 2;
    return out;
  }
  // homodyne_variance = mean + radius * cos(2 theta - atan2(c, half_diff))
  const double theta_max = 0.5 * std::atan2(cov.c_cross, half_diff);
  out.theta_max = normalize_angle(theta_max);
  out.theta_min = normalize_angle(theta_max + kPi / 2);
  return out;
}

double variance_to_db(double v) {
  if (!(v > 0.0)) throw InvalidArgument("variance must be positive to express in dB");
  return 10.0 * std::log10(v);
}

double db_to_variance(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sqzf
