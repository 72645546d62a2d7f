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


// sqzf: command-line front end for fitting EIT lineshapes and predicting the
// noise spectra of squeezed vacuum filtered by them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "sqzf/error.hpp"
#include "sqzf/io.hpp"
#include "sqzf/min_phase.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace io = sqzf::io;

constexpr int kExitIo = 1;
constexpr int kExitNumerical = 2;

struct Globals {
  std::uint64_t seed = 1;
  bool quiet = false;
  bool json_errors = false;
};

Globals g_opts;

void log(const std::string& msg) {
  if (!g_opts.quiet) std::cout << msg << '\n';
}

std::string mhz(double hz) {
  std::ostringstream os;
  os << hz / 1e6 << " MHz";
  return os.str();
}

int report_error(const char* kind, int code, const std::string& msg) {
  if (g_opts.json_errors) {
    std::cerr << json{{"error", {{"kind", kind}, {"exit_code", code}, {"message", msg}}}}.dump() << '\n';
  } else {
    std::cerr << "sqzf: " << msg << '\n';
  }
  return code;
}

const char* failure_name(sqzf::FitFailure f) {
  switch (f) {
    case sqzf::FitFailure::NonConvergence: return "non-convergence";
    case sqzf::FitFailure::Unidentifiable: return "unidentifiable";
    case sqzf::FitFailure::OutOfRange: return "out-of-range";
  }
  return "unknown";
}

fs::path out_path(const io::OutputSpec& out, const std::string& name) {
  return out.dir / (out.prefix + name);
}

json manifest_base(const std::string& command, const io::LoadedConfig& cfg) {
  json m = {{"command", command},
            {"version", SQZF_VERSION},
            {"phase_model", sqzf::to_string(cfg.scenario.filter.phase_model())},
            {"lo_strategy", sqzf::to_string(cfg.scenario.lo.kind)},
            {"grid_points", cfg.scenario.grid.points.size()},
            {"metadata", cfg.metadata},
            {"files", json::array()}};
  if (const auto& p = cfg.scenario.filter.lineshape()) m["lineshape"] = io::params_to_json(*p);
  if (cfg.fit) m["fit"] = io::fit_to_json(*cfg.fit);
  return m;
}

void add_spectrum(json& manifest, const io::OutputSpec& out, const std::string& name,
                  const sqzf::NoiseSpectrum& s) {
  const fs::path p = out_path(out, name);
  io::write_spectrum(p, s);
  manifest["files"].push_back(p.filename().string());
}

// RMS of measured minus predicted over valid measured points inside the grid.
double overlay_rms(const sqzf::NoiseSpectrum& measured, const sqzf::NoiseSpectrum& predicted) {
  const sqzf::SampledCurve curve{predicted.frequencies, predicted.noise_db};
  double acc = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < measured.frequencies.size(); ++i) {
    const double f = measured.frequencies[i];
    if (!measured.valid.empty() && !measured.valid[i]) continue;
    if (f < curve.x.front() || f > curve.x.back()) continue;
    const double d = measured.noise_db[i] - curve.at(f);
    acc += d * d;
    ++n;
  }
  return n > 0 ? std::sqrt(acc / n) : std::nan("");
}

io::LoadedConfig load(const std::string& config, const std::string& out_dir) {
  io::LoadedConfig cfg = io::load_config(config);
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  const auto& grid = cfg.scenario.grid.points;
  log("config " + config + ": " + std::to_string(grid.size()) + " points, " + mhz(grid.front()) + " to " +
      mhz(grid.back()) + ", filter " + std::string(sqzf::to_string(cfg.scenario.filter.phase_model())));
  return cfg;
}

int cmd_fit(const std::string& trace_path, const std::string& kind, const std::string& init_path,
            const std::string& out) {
  const auto trace = io::ingest_trace(trace_path, kind == "intensity" ? sqzf::TraceKind::Intensity
                                                                      : sqzf::TraceKind::Amplitude);
  std::optional<sqzf::LineshapeParams> init;
  if (!init_path.empty()) {
    std::ifstream is(init_path);
    if (!is) throw sqzf::IoError("cannot open '" + init_path + "'");
    json j;
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw sqzf::IoError(init_path + ": " + e.what());
    }
    init = io::params_from_json(j, "$");
  }
  try {
    const sqzf::FitResult fit = sqzf::fit_lineshape(trace, init);
    io::write_json(out, io::fit_to_json(fit));
    log("fit converged in " + std::to_string(fit.diagnostics.iterations) + " iterations: gamma " +
        mhz(fit.params.gamma) + ", delta0 " + mhz(fit.params.delta0) + ", rms " +
        io::format_double(fit.diagnostics.residual_rms));
    return 0;
  } catch (const sqzf::FitError& e) {
    json doc = io::fit_to_json(e.best());
    doc["diagnostics"]["converged"] = false;
    doc["diagnostics"]["failure"] = failure_name(e.reason());
    doc["diagnostics"]["message"] = e.what();
    io::write_json(out, doc);
    throw;
  }
}

int cmd_predict(const std::string& config, const std::string& out_dir) {
  const io::LoadedConfig cfg = load(config, out_dir);
  const sqzf::SpectrumFamily fam = sqzf::predict_spectrum(cfg.scenario);
  json m = manifest_base("predict", cfg);
  add_spectrum(m, cfg.output, "input_max.csv", fam.input_max);
  add_spectrum(m, cfg.output, "input_min.csv", fam.input_min);
  add_spectrum(m, cfg.output, "output_max.csv", fam.output_max);
  add_spectrum(m, cfg.output, "output_min.csv", fam.output_min);
  if (fam.lo) add_spectrum(m, cfg.output, "output_lo.csv", *fam.lo);
  if (cfg.overlays.measured_max) {
    add_spectrum(m, cfg.output, "measured_max.csv", *cfg.overlays.measured_max);
    m["overlay_rms_db"]["measured_max"] = overlay_rms(*cfg.overlays.measured_max, fam.output_max);
  }
  if (cfg.overlays.measured_min) {
    add_spectrum(m, cfg.output, "measured_min.csv", *cfg.overlays.measured_min);
    m["overlay_rms_db"]["measured_min"] = overlay_rms(*cfg.overlays.measured_min, fam.output_min);
  }
  io::write_json(out_path(cfg.output, "manifest.json"), m);
  log("predict: wrote " + std::to_string(m["files"].size()) + " spectra to " + cfg.output.dir.string());
  return 0;
}

int cmd_phase_scan(const std::string& config, const std::string& out_dir, int theta_samples) {
  const io::LoadedConfig cfg = load(config, out_dir);
  const int samples = theta_samples > 0 ? theta_samples : cfg.scenario.lo.theta_samples;
  const sqzf::PhaseScanResult scan = sqzf::phase_scan(cfg.scenario, samples);
  json m = manifest_base("phase-scan", cfg);
  m["theta_samples"] = samples;
  const fs::path surface = out_path(cfg.output, "surface.csv");
  io::write_surface(surface, scan);
  m["files"].push_back(surface.filename().string());
  add_spectrum(m, cfg.output, "envelope_min.csv", scan.envelope_min);
  add_spectrum(m, cfg.output, "envelope_max.csv", scan.envelope_max);
  double spread = 0.0;
  for (std::size_t i = 0; i < scan.frequencies.size(); ++i) {
    spread = std::max(spread, scan.envelope_max.noise_db[i] - scan.envelope_min.noise_db[i]);
  }
  m["max_envelope_spread_db"] = spread;
  io::write_json(out_path(cfg.output, "manifest.json"), m);
  log("phase-scan: " + std::to_string(samples) + " LO angles, max envelope spread " +
      io::format_double(spread) + " dB");
  return 0;
}

int cmd_angle_track(const std::string& config, const std::string& out_dir) {
  const io::LoadedConfig cfg = load(config, out_dir);
  const sqzf::AngleTrackingResult r = sqzf::angle_tracking(cfg.scenario);
  json m = manifest_base("angle-track", cfg);
  const fs::path profile = out_path(cfg.output, "theta_star.csv");
  io::write_phase_table(profile, r.frequencies, r.theta_star);
  m["files"].push_back(profile.filename().string());
  add_spectrum(m, cfg.output, "tracked_min.csv", r.tracked_min);
  m["anchors"] = json::array();
  for (const auto& a : r.anchors) {
    // Whole-hertz anchors get plain integer names (anchor_300000hz.csv).
    const double whole = std::round(a.anchor_hz);
    const std::string hz = whole == a.anchor_hz && whole < 1e15 ? std::to_string(static_cast<long long>(whole))
                                                                 : io::format_double(a.anchor_hz);
    const std::string name = "anchor_" + hz + "hz.csv";
    add_spectrum(m, cfg.output, name, a.spectrum);
    m["anchors"].push_back({{"anchor_hz", a.anchor_hz},
                            {"theta_rad", a.theta},
                            {"file", out_path(cfg.output, name).filename().string()}});
  }
  double lo = r.theta_star.front();
  double hi = lo;
  for (double t : r.theta_star) {
    // Spread measured relative to the first point, modulo pi.
    const double d = sqzf::angle_distance(t, r.theta_star.front());
    lo = std::min(lo, r.theta_star.front() + d);
    hi = std::max(hi, r.theta_star.front() + d);
  }
  m["theta_star_variation_rad"] = hi - lo;
  io::write_json(out_path(cfg.output, "manifest.json"), m);
  log("angle-track: optimal LO angle varies by " + io::format_double(hi - lo) + " rad over the band");
  return 0;
}

int cmd_kk(const std::string& trace_path, const std::string& kind, const std::string& out, double padding) {
  const auto trace = io::ingest_trace(trace_path, kind == "intensity" ? sqzf::TraceKind::Intensity
                                                                      : sqzf::TraceKind::Amplitude);
  const std::vector<double> phase = sqzf::minimum_phase(trace.detuning, trace.transmission, padding);
  io::write_phase_table(out, trace.detuning, phase);
  double worst = 0.0;
  const std::size_t n = phase.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    worst = std::max(worst, std::abs(sqzf::rotation_angle(phase[n - 1 - i], phase[i])));
  }
  log("kk: " + std::to_string(n) + " points, max |rotation angle| " + io::format_double(worst) + " rad");
  return 0;
}

int cmd_synth(const std::string& params_path, double span, int points, double noise, const std::string& kind,
              const std::string& out) {
  std::ifstream is(params_path);
  if (!is) throw sqzf::IoError("cannot open '" + params_path + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw sqzf::IoError(params_path + ": " + e.what());
  }
  const sqzf::LineshapeParams p = io::params_from_json(j, "$");
  if (points < 5) throw sqzf::InvalidArgument("synthetic trace needs at least 5 points");
  std::vector<double> det(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) det[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (points - 1);
  sqzf::TransmissionTrace trace = sqzf::synthesize_trace(p, det);
  std::mt19937_64 rng(g_opts.seed);
  std::normal_distribution<double> gauss(0.0, noise);
  for (double& t : trace.transmission) {
    if (kind == "intensity") t *= t;
    if (noise > 0.0) t = std::clamp(t + gauss(rng), 0.0, 1.0);
  }
  io::write_trace(out, trace);
  log("synth-trace: " + std::to_string(points) + " points over +-" + mhz(span));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-vacuum noise filtering through EIT transmission windows"};
  app.set_version_flag("--version", std::string("sqzf ") + SQZF_VERSION);
  app.add_option("--seed", g_opts.seed, "Seed for synthetic noise");
  app.add_flag("--quiet", g_opts.quiet, "Suppress progress output");
  app.add_flag("--json-errors", g_opts.json_errors, "Report errors as JSON on stderr");
  app.require_subcommand(1);

  std::string trace, out, init, config, out_dir, params, kind = "amplitude";
  int theta_samples = 0;
  int points = 201;
  double span = 5e6;
  double noise = 0.0;
  double padding = 4.0;
  const auto kinds = CLI::IsMember({"amplitude", "intensity"});

  auto* fit = app.add_subcommand("fit", "Fit the EIT lineshape to a transmission trace");
  fit->add_option("--trace", trace, "TraceFile CSV")->required();
  fit->add_option("--trace-kind", kind, "amplitude or intensity")->check(kinds);
  fit->add_option("--init", init, "Initial lineshape parameters (JSON)");
  fit->add_option("--out", out, "Fit result JSON")->required();

  auto* predict = app.add_subcommand("predict", "Predict input/output noise spectra");
  auto* scan = app.add_subcommand("phase-scan", "Noise versus LO angle and frequency");
  auto* track = app.add_subcommand("angle-track", "Frequency-dependent optimal LO angle");
  for (auto* sub : {predict, scan, track}) {
    sub->add_option("--config", config, "ConfigFile JSON")->required();
    sub->add_option("--out-dir", out_dir, "Override output.dir from the config");
  }
  scan->add_option("--theta-samples", theta_samples, "Number of LO angles (default from config)");

  auto* kk = app.add_subcommand("kk", "Minimum-phase reconstruction of a transmission trace");
  kk->add_option("--trace", trace, "TraceFile CSV on a symmetric uniform grid")->required();
  kk->add_option("--trace-kind", kind, "amplitude or intensity")->check(kinds);
  kk->add_option("--padding", padding, "Padded span as a multiple of the trace span");
  kk->add_option("--out", out, "Phase table CSV")->required();

  auto* synth = app.add_subcommand("synth-trace", "Sample a lineshape into a TraceFile");
  synth->add_option("--params", params, "Lineshape parameters (JSON)")->required();
  synth->add_option("--span-hz", span, "Half span of the detuning axis");
  synth->add_option("--points", points, "Number of samples");
  synth->add_option("--noise", noise, "Additive Gaussian noise sigma");
  synth->add_option("--trace-kind", kind, "amplitude or intensity")->check(kinds);
  synth->add_option("--out", out, "TraceFile CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (*fit) return cmd_fit(trace, kind, init, out);
    if (*predict) return cmd_predict(config, out_dir);
    if (*scan) return cmd_phase_scan(config, out_dir, theta_samples);
    if (*track) return cmd_angle_track(config, out_dir);
    if (*kk) return cmd_kk(trace, kind, out, padding);
    if (*synth) return cmd_synth(params, span, points, noise, kind, out);
  } catch (const sqzf::FitError& e) {
    return report_error("numerical", kExitNumerical,
                        std::string(e.what()) + " [" + failure_name(e.reason()) + "]");
  } catch (const sqzf::NumericalError& e) {
    return report_error("numerical", kExitNumerical, e.what());
  } catch (const sqzf::IoError& e) {
    return report_error("io", kExitIo, e.what());
  } catch (const sqzf::InvalidArgument& e) {
    return report_error("invalid-argument", kExitIo, e.what());
  } catch (const std::exception& e) {
    return report_error("io", kExitIo, e.what());
  }
  return kExitIo;
}
