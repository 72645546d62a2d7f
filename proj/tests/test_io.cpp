// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "sqzf/error.hpp"
#include "sqzf/fit.hpp"
#include "sqzf/io.hpp"

using namespace sqzf;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sqzf_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  // Runs `f` and returns the error text; fails the test if nothing throws.
  template <typename F>
  std::string error_of(F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      return e.what();
    }
    ADD_FAILURE() << "expected an exception";
    return {};
  }

  nlohmann::json base_config() {
    return nlohmann::json::parse(R"({
      "input": {"v_min_db": -2.0, "v_max_db": 8.0},
      "filter": {"lineshape": {"a_sym": 0.4, "b_asym": 0.0, "c_bg": 0.1, "gamma_hz": 1e6, "delta0_hz": 0.0},
                 "phase_model": "zero-phase"},
      "grid": {"start_hz": 1e5, "stop_hz": 2e6, "points": 20},
      "lo": {"strategy": "track-minimum"}
    })");
  }

  fs::path dir_;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2e6), "2e+06");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e7, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

TEST_F(IoTest, ThreeRowTraceIsTooShort) {
  const auto p = write("short.csv", "detuning_hz,transmission\n-1e6,0.3\n0,0.5\n1e6,0.3\n");
  const std::string msg = error_of([&] { io::ingest_trace(p); });
  EXPECT_NE(msg.find("at least 5 points"), std::string::npos) << msg;
}

TEST_F(IoTest, OutOfRangeTransmissionNamesTheRow) {
  const auto p = write("hot.csv",
                       "# lab export\ndetuning_hz,transmission\n-2e6,0.3\n-1e6,0.4\n0,1.2\n1e6,0.4\n2e6,0.3\n");
  const std::string msg = error_of([&] { io::ingest_trace(p); });
  EXPECT_NE(msg.find("hot.csv:5:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("1.2"), std::string::npos) << msg;
}

TEST_F(IoTest, TraceDiagnostics) {
  EXPECT_NE(error_of([&] { io::ingest_trace(write("cols.csv", "freq,transmission\n1,0.5\n")); })
                .find("missing required column 'detuning_hz'"),
            std::string::npos);
  const auto p = write("order.csv", "detuning_hz,transmission\n0,0.3\n1,0.3\n1,0.3\n2,0.3\n3,0.3\n");
  EXPECT_NE(error_of([&] { io::ingest_trace(p); }).find("order.csv:4:"), std::string::npos);
  const auto q = write("text.csv", "detuning_hz,transmission\n0,0.3\n1,abc\n");
  EXPECT_NE(error_of([&] { io::ingest_trace(q); }).find("text.csv:3:"), std::string::npos);
  EXPECT_THROW(io::ingest_trace(dir_ / "missing.csv"), IoError);
}

TEST_F(IoTest, IntensityTraceIsConvertedToAmplitude) {
  const auto p = write("int.csv", "detuning_hz,transmission\n-2,0.25\n-1,0.36\n0,0.49\n1,0.36\n2,0.25\n");
  const auto t = io::ingest_trace(p, TraceKind::Intensity);
  EXPECT_EQ(t.kind, TraceKind::Amplitude);
  EXPECT_DOUBLE_EQ(t.transmission[2], 0.7);
}

TEST_F(IoTest, SyntheticTraceRoundTripsThroughFit) {
  const LineshapeParams truth{0.24, 0.0, 0.28, 2e6, 0.0};
  const auto detuning = linspace(-10e6, 10e6, 201);
  const auto p = dir_ / "broad.csv";
  io::write_trace(p, synthesize_trace(truth, detuning));
  const auto trace = io::ingest_trace(p);
  ASSERT_EQ(trace.detuning.size(), 201u);
  const auto fit = fit_lineshape(trace);
  const auto [lo, peak] = lineshape_range(fit.params, -10e6, 10e6);
  (void)lo;
  EXPECT_NEAR(peak, 0.52, 0.01);
}

TEST_F(IoTest, SpectrumRoundTripKeepsEveryDigit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  NoiseSpectrum s;
  s.frequencies = linspace(1e5, 2e6, 40);
  for (std::size_t i = 0; i < 40; ++i) {
    s.noise_db.push_back(u(rng) / 3.0);
    s.valid.push_back(i % 7 != 3);
  }
  s.label = "expected max. noise";
  s.lo_strategy = "track-maximum";
  const auto p = dir_ / "spec.csv";
  io::write_spectrum(p, s);
  const auto back = io::read_spectrum(p);
  EXPECT_EQ(back.frequencies, s.frequencies);
  EXPECT_EQ(back.noise_db, s.noise_db);
  EXPECT_EQ(back.valid, s.valid);
  EXPECT_EQ(back.label, s.label);
  EXPECT_EQ(back.lo_strategy, s.lo_strategy);

  s.valid.clear();
  io::write_spectrum(p, s);
  EXPECT_TRUE(io::read_spectrum(p).valid.empty());
}

TEST_F(IoTest, PhaseTableRoundTrip) {
  const std::vector<double> f{-1e6, 0.0, 1e6};
  const std::vector<double> th{0.125, 0.0, -0.3};
  const auto p = dir_ / "phase.csv";
  io::write_phase_table(p, f, th);
  const auto c = io::read_phase_table(p);
  EXPECT_EQ(c.x, f);
  EXPECT_EQ(c.y, th);
}

TEST_F(IoTest, InputTable) {
  const auto p = write("in.csv", "frequency_hz,v_min_db,v_max_db,angle_rad\n1e5,-2,8,0\n2e6,-1,6,0.1\n");
  const auto s = io::read_input_table(p);
  EXPECT_NEAR(10 * std::log10(s.at(2e6).v_max), 6.0, 1e-12);
}

TEST_F(IoTest, ConfigParsesAndResolvesPaths) {
  write("in.csv", "frequency_hz,v_min_db,v_max_db,angle_rad\n1e4,-2,8,0\n3e6,-1,6,0.1\n");
  auto doc = base_config();
  doc["input"] = {{"table", "in.csv"}};
  doc["grid"]["exclude_hz"] = {{0.8e6, 1.1e6}};
  doc["output"] = {{"dir", "out"}, {"prefix", "narrow_"}};
  doc["metadata"] = {{"control_power_mw", 4.2}};
  write("cfg.json", doc.dump());
  const auto cfg = io::load_config(dir_ / "cfg.json");
  EXPECT_EQ(cfg.scenario.grid.points.size(), 20u);
  EXPECT_EQ(cfg.scenario.excluded_hz.size(), 1u);
  EXPECT_EQ(cfg.output.prefix, "narrow_");
  EXPECT_EQ(cfg.output.dir, fs::path("out"));
  EXPECT_EQ(cfg.metadata["control_power_mw"], 4.2);
  EXPECT_FALSE(cfg.fit.has_value());
}

TEST_F(IoTest, ConfigFitsTraceFilters) {
  io::write_trace(dir_ / "t.csv", synthesize_trace({0.4, 0.0, 0.1, 1e6, 0.0}, linspace(-5e6, 5e6, 101)));
  auto doc = base_config();
  doc["filter"] = {{"trace", "t.csv"}, {"phase_model", "zero-phase"}};
  const auto cfg = io::parse_config(doc, dir_);
  ASSERT_TRUE(cfg.fit.has_value());
  EXPECT_NEAR(cfg.fit->params.gamma, 1e6, 1e-3);
}

TEST_F(IoTest, ConfigErrorsCarryTheirPath) {
  auto expect_path = [&](nlohmann::json doc, const std::string& path) {
    const std::string msg = error_of([&] { io::parse_config(doc, dir_); });
    EXPECT_NE(msg.find(path), std::string::npos) << msg;
  };
  auto doc = base_config();
  doc["filter"]["lineshape"]["gama_hz"] = 1e6;
  expect_path(doc, "$.filter.lineshape.gama_hz");

  doc = base_config();
  doc["extra"] = 1;
  expect_path(doc, "$.extra");

  doc = base_config();
  doc["lo"] = {{"strategy", "fixed-angle"}};
  expect_path(doc, "$.lo.angle_rad");

  doc = base_config();
  doc["grid"]["points"] = 2.5;
  expect_path(doc, "$.grid.points");

  doc = base_config();
  doc["filter"]["phase_model"] = "causal";
  expect_path(doc, "$.filter.phase_model");

  doc = base_config();
  doc["filter"].erase("phase_model");
  expect_path(doc, "$.filter.phase_model");

  doc = base_config();
  doc["input"]["v_min_db"] = 9.0;
  expect_path(doc, "$.input");

  doc = base_config();
  doc["lo"]["theta_samples"] = 4;
  expect_path(doc, "$.lo.theta_samples");

  doc = base_config();
  doc["grid"]["exclude_hz"] = {{2e6, 1e6}};
  expect_path(doc, "$.grid.exclude_hz[0]");

  doc = base_config();
  doc["filter"]["domain_hz"] = 1e6;
  expect_path(doc, "$.grid");

  EXPECT_THROW(io::load_config(write("bad.json", "{ not json")), IoError);
}

TEST(FitJson, ParamsRoundTrip) {
  const LineshapeParams p{0.1, -0.02, 0.3, 1.5e6, 1e4};
  const auto q = io::params_from_json(io::params_to_json(p));
  EXPECT_EQ(q.a_sym, p.a_sym);
  EXPECT_EQ(q.b_asym, p.b_asym);
  EXPECT_EQ(q.c_bg, p.c_bg);
  EXPECT_EQ(q.gamma, p.gamma);
  EXPECT_EQ(q.delta0, p.delta0);
  EXPECT_THROW(io::params_from_json({{"a_sym", 0.1}}), IoError);
}
