// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sqzf/error.hpp"
#include "sqzf/scenario.hpp"

using namespace sqzf;

namespace {

constexpr double kPi = std::numbers::pi;

ScenarioConfig make_config(const LineshapeParams& p, PhaseModel model, double vmin_db, double vmax_db,
                           double angle = 0.0, LoStrategy lo = {}) {
  FilterDomain d;
  d.half_points = 4096;
  return ScenarioConfig{InputNoiseSpec::constant_db(vmin_db, vmax_db, angle),
                        FilterResponse::from_lineshape(p, model, d), FrequencyGrid::linspace(1e5, 2e6, 39),
                        lo, {}, ""};
}

ScenarioConfig broad_window() { return make_config({0.24, 0.0, 0.28, 2e6, 0.0}, PhaseModel::ZeroPhase, -1.5, 9.0); }
ScenarioConfig narrow_window() { return make_config({0.40, 0.0, 0.10, 1e6, 0.0}, PhaseModel::ZeroPhase, -2.0, 8.0); }
ScenarioConfig asymmetric_window() {
  LoStrategy lo;
  lo.anchors_hz = {3e5, 1.2e6};
  return make_config({0.1676, 0.04, 0.08, 0.7e6, 0.0}, PhaseModel::MinimumPhase, -2.0, 8.0, kPi / 2, lo);
}

double db(double v) { return 10.0 * std::log10(v); }

// Homodyne variance at LO angle theta: the quadrature rotated back by -theta.
double homodyne(const QuadratureCovariance& v, double theta) {
  return oracle::rotate({v.v_plus, v.v_minus, v.c_cross}, -theta).vp;
}

std::size_t index_of(const std::vector<double>& f, double hz) {
  return static_cast<std::size_t>(std::min_element(f.begin(), f.end(), [&](double a, double b) {
                                    return std::abs(a - hz) < std::abs(b - hz);
                                  }) - f.begin());
}

void expect_identical(const NoiseSpectrum& a, const NoiseSpectrum& b) {
  EXPECT_EQ(a.frequencies, b.frequencies);
  EXPECT_EQ(a.noise_db, b.noise_db);
  EXPECT_EQ(a.valid, b.valid);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.lo_strategy, b.lo_strategy);
}

}  // namespace

TEST(FrequencyGrid, Validation) {
  const auto g = FrequencyGrid::linspace(1e5, 2e6, 20);
  EXPECT_EQ(g.points.size(), 20u);
  EXPECT_EQ(g.points.back(), 2e6);
  EXPECT_THROW(FrequencyGrid::linspace(0.0, 1e6, 10), InvalidArgument);
  EXPECT_THROW(FrequencyGrid::linspace(1e6, 1e5, 10), InvalidArgument);
  EXPECT_THROW(FrequencyGrid::linspace(1e5, 1e6, 0), InvalidArgument);
  FrequencyGrid dup{{1e5, 1e5}};
  EXPECT_THROW(dup.validate(), InvalidArgument);
}

TEST(InputNoiseSpec, TableInterpolatesInDb) {
  const auto s = InputNoiseSpec::table({1e5, 3e5}, {-2.0, -1.0}, {8.0, 6.0}, {0.0, 0.2});
  const auto p = s.at(2e5);
  EXPECT_NEAR(db(p.v_min), -1.5, 1e-12);
  EXPECT_NEAR(db(p.v_max), 7.0, 1e-12);
  EXPECT_NEAR(p.angle, 0.1, 1e-15);
  EXPECT_THROW(s.check_covers(FrequencyGrid::linspace(1e5, 4e5, 5)), InvalidArgument);
  EXPECT_THROW(InputNoiseSpec::table({1e5, 3e5}, {2.0, -1.0}, {1.0, 6.0}, {0.0, 0.0}), InvalidArgument);
}

TEST(LoKind, Names) {
  for (auto k : {LoKind::FixedAngle, LoKind::TrackMinimum, LoKind::TrackMaximum, LoKind::Scan}) {
    EXPECT_EQ(parse_lo_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_lo_kind("wander"), InvalidArgument);
}

TEST(PredictSpectrum, AttenuatorMatchesDirectPropagation) {
  const auto c = broad_window();
  const auto fam = predict_spectrum(c);
  const double vmin = std::pow(10.0, -0.15);
  const double vmax = std::pow(10.0, 0.9);
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    const double w = c.grid.points[i];
    const double tp = oracle::lineshape(0.24, 0.0, 0.28, 2e6, w);
    const double tm = oracle::lineshape(0.24, 0.0, 0.28, 2e6, -w);
    const auto out = oracle::attenuate(tp, tm, vmin, vmax);
    EXPECT_NEAR(fam.output_min.noise_db[i], db(std::min(out.vp, out.vm)), 1e-10);
    EXPECT_NEAR(fam.output_max.noise_db[i], db(std::max(out.vp, out.vm)), 1e-10);
    EXPECT_NEAR(fam.input_min.noise_db[i], -1.5, 1e-12);
    EXPECT_NEAR(fam.input_max.noise_db[i], 9.0, 1e-12);
  }
  ASSERT_TRUE(fam.lo.has_value());
  EXPECT_EQ(fam.lo->noise_db, fam.output_min.noise_db);
  EXPECT_EQ(fam.output_max.label, "expected max. noise");
}

TEST(PredictSpectrum, NarrowWindowFiltersHighFrequencies) {
  const auto c = narrow_window();
  const auto fam = predict_spectrum(c);
  const auto& f = c.grid.points;
  const std::size_t lo = index_of(f, 3e5);
  const std::size_t hi = index_of(f, 2e6);
  const double att_lo = fam.input_max.noise_db[lo] - fam.output_max.noise_db[lo];
  const double att_hi = fam.input_max.noise_db[hi] - fam.output_max.noise_db[hi];
  EXPECT_GT(att_hi, att_lo);
  for (std::size_t i = index_of(f, 1e6) + 1; i < f.size(); ++i) {
    EXPECT_LE(fam.output_max.noise_db[i], fam.output_max.noise_db[i - 1]);
  }
}

TEST(PredictSpectrum, UnitFilterIsExactNoOp) {
  ScenarioConfig c{InputNoiseSpec::table({1e5, 1e6, 2e6}, {-2.0, -3.0, -1.0}, {8.0, 9.0, 7.0}, {0.0, 0.3, 1.0}),
                   unit_filter(), FrequencyGrid::linspace(1e5, 2e6, 25), {}, {}, ""};
  const auto fam = predict_spectrum(c);
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    const auto s = evaluate_point(c, c.grid.points[i]);
    EXPECT_EQ(s.output, make_covariance(s.input));
  }
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    EXPECT_NEAR(fam.output_min.noise_db[i], fam.input_min.noise_db[i], 1e-12);
    EXPECT_NEAR(fam.output_max.noise_db[i], fam.input_max.noise_db[i], 1e-12);
  }
}

TEST(PredictSpectrum, FixedAngleUsesHomodyneVariance) {
  LoStrategy lo;
  lo.kind = LoKind::FixedAngle;
  lo.angle = 0.3;
  auto c = make_config({0.3, 0.02, 0.1, 1e6, 0.0}, PhaseModel::MinimumPhase, -2.0, 8.0, 0.1, lo);
  const auto fam = predict_spectrum(c);
  ASSERT_TRUE(fam.lo.has_value());
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    const auto out = evaluate_point(c, c.grid.points[i]).output;
    EXPECT_NEAR(fam.lo->noise_db[i], db(homodyne(out, 0.3)), 1e-12);
    EXPECT_LE(fam.output_min.noise_db[i], fam.lo->noise_db[i] + 1e-12);
    EXPECT_GE(fam.output_max.noise_db[i], fam.lo->noise_db[i] - 1e-12);
  }
  c.lo.kind = LoKind::Scan;
  EXPECT_FALSE(predict_spectrum(c).lo.has_value());
}

TEST(PredictSpectrum, ExcludedBandsAreMasked) {
  auto c = broad_window();
  c.excluded_hz = {{0.8e6, 1.1e6}};
  const auto fam = predict_spectrum(c);
  ASSERT_EQ(fam.output_max.valid.size(), c.grid.points.size());
  EXPECT_TRUE(fam.input_max.valid.empty());
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    const double f = c.grid.points[i];
    EXPECT_EQ(fam.output_max.valid[i], !(f >= 0.8e6 && f <= 1.1e6)) << f;
  }
}

TEST(PredictSpectrum, RejectsGridOutsideFilter) {
  ScenarioConfig c{InputNoiseSpec::constant_db(-2, 8, 0),
                   FilterResponse::from_table({{-1e6, 0.0, 1e6}, {0.5, 0.5, 0.5}}, PhaseModel::ZeroPhase),
                   FrequencyGrid::linspace(1e5, 2e6, 5), {}, {}, ""};
  EXPECT_THROW(validate_config(c), InvalidArgument);
  EXPECT_THROW(predict_spectrum(c), InvalidArgument);
  EXPECT_THROW(serial::predict_spectrum(c), InvalidArgument);
}

TEST(PhaseScan, EnvelopeConvergesToEigenvalues) {
  const auto c = asymmetric_window();
  const auto scan = phase_scan(c, 1024);
  ASSERT_EQ(scan.thetas.size(), 1024u);
  EXPECT_EQ(scan.thetas.front(), 0.0);
  EXPECT_LT(scan.thetas.back(), kPi);
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    const auto ext = min_max_quadratures(evaluate_point(c, c.grid.points[i]).output);
    const double env_min = std::pow(10.0, scan.envelope_min.noise_db[i] / 10.0);
    const double env_max = std::pow(10.0, scan.envelope_max.noise_db[i] / 10.0);
    EXPECT_LT(std::abs(env_min - ext.v_min) / ext.v_min, 1e-3);
    EXPECT_LT(std::abs(env_max - ext.v_max) / ext.v_max, 1e-3);
    EXPECT_GE(env_min, ext.v_min * (1 - 1e-12));
    EXPECT_LE(env_max, ext.v_max * (1 + 1e-12));
  }
}

TEST(PhaseScan, SurfaceMatchesHomodyneOracle) {
  const auto c = broad_window();
  const auto scan = phase_scan(c, 16);
  for (std::size_t j = 0; j < scan.thetas.size(); ++j) {
    for (std::size_t i = 0; i < c.grid.points.size(); i += 7) {
      const auto out = evaluate_point(c, c.grid.points[i]).output;
      EXPECT_NEAR(scan.at(j, i), db(homodyne(out, scan.thetas[j])), 1e-12);
    }
  }
}

TEST(PhaseScan, ControlOnShowsPhaseDependence) {
  const auto scan = phase_scan(broad_window(), 64);
  double spread = 0.0;
  for (std::size_t i = 0; i < scan.frequencies.size(); ++i) {
    spread = std::max(spread, scan.envelope_max.noise_db[i] - scan.envelope_min.noise_db[i]);
  }
  EXPECT_GT(spread, 3.0);
}

TEST(PhaseScan, ControlOffReturnsToShotNoise) {
  const double c_bg = 0.03;
  const double vmax_db = 8.0;
  const auto scan = phase_scan(make_config({0.0, 0.0, c_bg, 2e6, 0.0}, PhaseModel::ZeroPhase, -2.0, vmax_db), 64);
  const double bound = db(1.0 + c_bg * c_bg * (std::pow(10.0, vmax_db / 10.0) - 1.0));
  for (double v : scan.noise_db) {
    EXPECT_LE(std::abs(v), bound + 1e-12);
    EXPECT_LT(std::abs(v), 0.05);
  }
}

TEST(PhaseScan, VacuumInputIsFlat) {
  const auto scan = phase_scan(make_config({0.2, 0.05, 0.3, 1e6, 0.0}, PhaseModel::MinimumPhase, 0.0, 0.0), 16);
  for (double v : scan.noise_db) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(PhaseScan, NeedsEightAngles) { EXPECT_THROW(phase_scan(broad_window(), 7), InvalidArgument); }

TEST(AngleTracking, AsymmetricWindowRotatesTheAngle) {
  const auto r = angle_tracking(asymmetric_window());
  double worst = 0.0;
  for (double a : r.theta_star) {
    for (double b : r.theta_star) worst = std::max(worst, std::abs(angle_distance(a, b)));
  }
  EXPECT_GT(worst, 0.05);
  for (double t : r.theta_star) {
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, kPi);
  }
}

TEST(AngleTracking, SymmetricWindowKeepsTheAngle) {
  LoStrategy lo;
  lo.anchors_hz = {3e5};
  const auto r = angle_tracking(make_config({0.2, 0.0, 0.05, 0.7e6, 0.0}, PhaseModel::MinimumPhase, -2, 8, kPi / 2, lo));
  for (double t : r.theta_star) EXPECT_LT(std::abs(angle_distance(t, r.theta_star.front())), 1e-3);
}

TEST(AngleTracking, AnchorsAreOptimalOnlyAtTheirOwnFrequency) {
  const auto c = asymmetric_window();
  const auto r = angle_tracking(c);
  ASSERT_EQ(r.anchors.size(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    const auto& s = r.anchors[a].spectrum;
    const std::size_t own = index_of(r.frequencies, r.anchors[a].anchor_hz);
    const std::size_t other = index_of(r.frequencies, r.anchors[1 - a].anchor_hz);
    EXPECT_NEAR(s.noise_db[own], r.tracked_min.noise_db[own], 1e-9);
    EXPECT_GT(s.noise_db[other], r.tracked_min.noise_db[other] + 1e-4);
    for (std::size_t i = 0; i < s.noise_db.size(); ++i) {
      EXPECT_GE(s.noise_db[i], r.tracked_min.noise_db[i] - 1e-12);
    }
  }
  EXPECT_NE(r.anchors[0].spectrum.noise_db, r.anchors[1].spectrum.noise_db);
  EXPECT_EQ(r.anchors[0].spectrum.label, "LO fixed at min. noise angle of 0.3 MHz");
}

TEST(AngleTracking, ZeroPhaseIsRejected) {
  EXPECT_THROW(angle_tracking(broad_window()), InvalidArgument);
  auto c = asymmetric_window();
  c.lo.anchors_hz = {1e12};
  EXPECT_THROW(angle_tracking(c), InvalidArgument);
}

TEST(ScenarioProperties, ZeroPhaseOutputIsBracketed) {
  // Each output quadrature is a convex combination of both input
  // quadratures and vacuum. With a symmetric window (T+ = T-) there is no
  // mixing and each component stays between its own input and 1.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const bool symmetric = k % 2 == 0;
    const double vmin_db = -6.0 * u(rng);
    const double vmax_db = 12.0 * u(rng);
    const LineshapeParams p{0.4 * u(rng), 0.0, 0.5 * u(rng), (0.3 + 2.0 * u(rng)) * 1e6,
                            symmetric ? 0.0 : (u(rng) - 0.5) * 1e6};
    const auto c = make_config(p, PhaseModel::ZeroPhase, vmin_db, vmax_db);
    const double vp = std::pow(10.0, vmin_db / 10.0);
    const double vm = std::pow(10.0, vmax_db / 10.0);
    const double lo_all = std::min({1.0, vp, vm});
    const double hi_all = std::max({1.0, vp, vm});
    for (double w : c.grid.points) {
      const auto out = evaluate_point(c, w).output;
      for (double v : {out.v_plus, out.v_minus}) {
        EXPECT_GE(v, lo_all - 1e-12);
        EXPECT_LE(v, hi_all + 1e-12);
      }
      if (symmetric) {
        EXPECT_GE(out.v_plus, std::min(1.0, vp) - 1e-12);
        EXPECT_LE(out.v_plus, std::max(1.0, vp) + 1e-12);
        EXPECT_GE(out.v_minus, std::min(1.0, vm) - 1e-12);
        EXPECT_LE(out.v_minus, std::max(1.0, vm) + 1e-12);
      }
    }
  }
}

TEST(ScenarioProperties, SerialAndParallelAreBitIdentical) {
  auto c4 = asymmetric_window();
  c4.excluded_hz = {{0.8e6, 1.1e6}};
  const auto a = predict_spectrum(c4);
  const auto b = serial::predict_spectrum(c4);
  expect_identical(a.output_max, b.output_max);
  expect_identical(a.output_min, b.output_min);
  expect_identical(a.input_max, b.input_max);
  expect_identical(*a.lo, *b.lo);

  const auto sa = phase_scan(c4, 32);
  const auto sb = serial::phase_scan(c4, 32);
  EXPECT_EQ(sa.noise_db, sb.noise_db);
  expect_identical(sa.envelope_min, sb.envelope_min);

  const auto ta = angle_tracking(c4);
  const auto tb = serial::angle_tracking(c4);
  EXPECT_EQ(ta.theta_star, tb.theta_star);
  expect_identical(ta.tracked_min, tb.tracked_min);
  for (std::size_t i = 0; i < ta.anchors.size(); ++i) expect_identical(ta.anchors[i].spectrum, tb.anchors[i].spectrum);
}

TEST(ScenarioProperties, RepeatedRunsAreBitIdentical) {
  const auto c = narrow_window();
  const auto a = predict_spectrum(c);
  const auto b = predict_spectrum(c);
  expect_identical(a.output_max, b.output_max);
  expect_identical(a.output_min, b.output_min);
}
