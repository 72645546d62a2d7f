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


// ConfigFile and fit-result JSON.

#include <fstream>
#include <set>

#include "sqzf/error.hpp"
#include "sqzf/io.hpp"

namespace sqzf::io {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& msg) {
  throw IoError("config " + where + ": " + msg);
}

void expect_keys(const json& j, const std::string& where, const std::set<std::string>& allowed,
                 const std::set<std::string>& required = {}) {
  if (!j.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) schema_error(where + "." + key, "unknown key");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) schema_error(where + "." + key, "missing required key");
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) schema_error(where + "." + key, "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) schema_error(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string string(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_array()) schema_error(where + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema_error(where + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Wraps InvalidArgument from domain constructors with the JSON location.
template <typename F>
auto at_path(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    schema_error(where, e.what());
  }
}

InputNoiseSpec parse_input(const json& j, const fs::path& base) {
  const std::string where = "$.input";
  if (j.is_object() && j.contains("table")) {
    expect_keys(j, where, {"table"});
    return read_input_table(resolve(base, string(j, "table", where)));
  }
  expect_keys(j, where, {"v_min_db", "v_max_db", "angle_rad"}, {"v_min_db", "v_max_db"});
  const double lo = number(j, "v_min_db", where);
  const double hi = number(j, "v_max_db", where);
  const double angle = j.contains("angle_rad") ? number(j, "angle_rad", where) : 0.0;
  return at_path(where, [&] { return InputNoiseSpec::constant_db(lo, hi, angle); });
}

FilterResponse parse_filter(const json& j, const fs::path& base, std::optional<FitResult>& fit) {
  const std::string where = "$.filter";
  expect_keys(j, where,
              {"lineshape", "trace", "trace_kind", "fit_init", "phase_model", "phase_table", "domain_hz",
               "phase_half_points", "padding_factor"},
              {"phase_model"});
  if (j.contains("lineshape") == j.contains("trace")) {
    schema_error(where, "exactly one of 'lineshape' or 'trace' is required");
  }
  const PhaseModel model =
      at_path(where + ".phase_model", [&] { return parse_phase_model(string(j, "phase_model", where)); });

  LineshapeParams params;
  if (j.contains("lineshape")) {
    params = params_from_json(j.at("lineshape"), where + ".lineshape");
  } else {
    TraceKind kind = TraceKind::Amplitude;
    if (j.contains("trace_kind")) {
      const std::string k = string(j, "trace_kind", where);
      if (k == "intensity") {
        kind = TraceKind::Intensity;
      } else if (k != "amplitude") {
        schema_error(where + ".trace_kind", "expected 'amplitude' or 'intensity'");
      }
    }
    std::optional<LineshapeParams> init;
    if (j.contains("fit_init")) init = params_from_json(j.at("fit_init"), where + ".fit_init");
    const TransmissionTrace trace = ingest_trace(resolve(base, string(j, "trace", where)), kind);
    fit = fit_lineshape(trace, init);
    params = fit->params;
  }

  FilterDomain domain;
  if (j.contains("domain_hz")) domain.max_hz = number(j, "domain_hz", where);
  if (j.contains("phase_half_points")) domain.half_points = integer(j, "phase_half_points", where);
  if (j.contains("padding_factor")) domain.padding_factor = number(j, "padding_factor", where);

  std::optional<SampledCurve> table;
  if (j.contains("phase_table")) {
    if (model != PhaseModel::ExplicitTable) {
      schema_error(where + ".phase_table", "only allowed with phase_model 'explicit-table'");
    }
    table = read_phase_table(resolve(base, string(j, "phase_table", where)));
  }
  return at_path(where, [&] { return FilterResponse::from_lineshape(params, model, domain, std::move(table)); });
}

FrequencyGrid parse_grid(const json& j, std::vector<std::pair<double, double>>& excluded) {
  const std::string where = "$.grid";
  expect_keys(j, where, {"start_hz", "stop_hz", "points", "exclude_hz"}, {"start_hz", "stop_hz", "points"});
  const double start = number(j, "start_hz", where);
  const double stop = number(j, "stop_hz", where);
  const int points = integer(j, "points", where);
  if (j.contains("exclude_hz")) {
    const json& ex = j.at("exclude_hz");
    if (!ex.is_array()) schema_error(where + ".exclude_hz", "expected an array of [lo, hi] pairs");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const std::string w = where + ".exclude_hz[" + std::to_string(i) + "]";
      if (!ex[i].is_array() || ex[i].size() != 2 || !ex[i][0].is_number() || !ex[i][1].is_number()) {
        schema_error(w, "expected [lo, hi]");
      }
      const double lo = ex[i][0].get<double>();
      const double hi = ex[i][1].get<double>();
      if (!(lo <= hi)) schema_error(w, "lo must not exceed hi");
      excluded.emplace_back(lo, hi);
    }
  }
  return at_path(where, [&] { return FrequencyGrid::linspace(start, stop, points); });
}

LoStrategy parse_lo(const json& j) {
  const std::string where = "$.lo";
  expect_keys(j, where, {"strategy", "angle_rad", "anchors_hz", "theta_samples"}, {"strategy"});
  LoStrategy lo;
  lo.kind = at_path(where + ".strategy", [&] { return parse_lo_kind(string(j, "strategy", where)); });
  if (j.contains("angle_rad")) lo.angle = number(j, "angle_rad", where);
  if (lo.kind == LoKind::FixedAngle && !j.contains("angle_rad")) {
    schema_error(where + ".angle_rad", "required for strategy 'fixed-angle'");
  }
  if (j.contains("anchors_hz")) lo.anchors_hz = number_list(j, "anchors_hz", where);
  if (j.contains("theta_samples")) {
    lo.theta_samples = integer(j, "theta_samples", where);
    if (lo.theta_samples < 8) schema_error(where + ".theta_samples", "must be at least 8");
  }
  return lo;
}

Overlays parse_overlays(const json& j, const fs::path& base) {
  const std::string where = "$.overlays";
  expect_keys(j, where, {"measured_max", "measured_min"});
  Overlays o;
  if (j.contains("measured_max")) o.measured_max = read_spectrum(resolve(base, string(j, "measured_max", where)));
  if (j.contains("measured_min")) o.measured_min = read_spectrum(resolve(base, string(j, "measured_min", where)));
  return o;
}

}  // namespace

json params_to_json(const LineshapeParams& p) {
  return {{"a_sym", p.a_sym}, {"b_asym", p.b_asym}, {"c_bg", p.c_bg}, {"gamma_hz", p.gamma},
          {"delta0_hz", p.delta0}};
}

LineshapeParams params_from_json(const json& j, const std::string& where) {
  expect_keys(j, where, {"a_sym", "b_asym", "c_bg", "gamma_hz", "delta0_hz"},
              {"a_sym", "b_asym", "c_bg", "gamma_hz", "delta0_hz"});
  LineshapeParams p{number(j, "a_sym", where), number(j, "b_asym", where), number(j, "c_bg", where),
                    number(j, "gamma_hz", where), number(j, "delta0_hz", where)};
  if (!(p.gamma > 0.0)) schema_error(where + ".gamma_hz", "must be positive");
  return p;
}

json fit_to_json(const FitResult& fit) {
  const auto& d = fit.diagnostics;
  json se = {{"a_sym", d.std_error[0]}, {"b_asym", d.std_error[1]}, {"c_bg", d.std_error[2]},
             {"gamma_hz", d.std_error[3]}, {"delta0_hz", d.std_error[4]}};
  return {{"params", params_to_json(fit.params)},
          {"diagnostics",
           {{"converged", d.converged},
            {"iterations", d.iterations},
            {"ssr", d.ssr},
            {"residual_rms", d.residual_rms},
            {"std_error", se},
            {"message", d.message}}}};
}

LoadedConfig parse_config(const json& doc, const fs::path& base_dir) {
  expect_keys(doc, "$", {"input", "filter", "grid", "lo", "output", "overlays", "metadata"},
              {"input", "filter", "grid", "lo"});
  std::optional<FitResult> fit;
  std::vector<std::pair<double, double>> excluded;
  InputNoiseSpec input = parse_input(doc.at("input"), base_dir);
  FilterResponse filter = parse_filter(doc.at("filter"), base_dir, fit);
  FrequencyGrid grid = parse_grid(doc.at("grid"), excluded);
  LoStrategy lo = parse_lo(doc.at("lo"));

  OutputSpec out;
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    expect_keys(o, "$.output", {"dir", "prefix"});
    if (o.contains("dir")) out.dir = string(o, "dir", "$.output");
    if (o.contains("prefix")) out.prefix = string(o, "prefix", "$.output");
  }
  Overlays overlays;
  if (doc.contains("overlays")) overlays = parse_overlays(doc.at("overlays"), base_dir);
  json metadata = doc.contains("metadata") ? doc.at("metadata") : json::object();
  if (!metadata.is_object()) schema_error("$.metadata", "expected an object");

  ScenarioConfig scenario{std::move(input), std::move(filter), std::move(grid), std::move(lo),
                          std::move(excluded), metadata.dump()};
  at_path("$.grid", [&] {
    validate_config(scenario);
    return 0;
  });
  return {std::move(scenario), std::move(out), std::move(overlays), std::move(metadata), std::move(fit)};
}

LoadedConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw IoError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

}  // namespace sqzf::io
