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


#include "sqzf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sqzf/error.hpp"

namespace sqzf::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail(const fs::path& path, int line, const std::string& msg) {
  throw IoError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

const CsvTable& require_columns(const CsvTable& t, const fs::path& path,
                                std::initializer_list<const char*> cols) {
  for (const char* c : cols) {
    if (t.column(c) < 0) throw IoError(path.string() + ": missing required column '" + c + "'");
  }
  return t;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      t.comments.push_back(trim(std::string_view(s).substr(1)));
      continue;
    }
    std::vector<std::string> cells = split(s);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      fail(path, lineno, "expected " + std::to_string(t.header.size()) + " columns, found " +
                             std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const char* first = cells[c].data();
      const char* last = first + cells[c].size();
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last) {
        fail(path, lineno, "column '" + t.header[c] + "': cannot parse '" + cells[c] + "' as a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(lineno);
  }
  if (t.header.empty()) throw IoError(path.string() + ": missing header row");
  return t;
}

TransmissionTrace ingest_trace(const fs::path& path, TraceKind kind) {
  const CsvTable t = read_csv(path);
  require_columns(t, path, {"detuning_hz", "transmission"});
  const auto cd = static_cast<std::size_t>(t.column("detuning_hz"));
  const auto ct = static_cast<std::size_t>(t.column("transmission"));
  TransmissionTrace trace;
  trace.kind = kind;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double d = t.rows[r][cd];
    const double v = t.rows[r][ct];
    if (!std::isfinite(d) || !std::isfinite(v)) fail(path, t.line_numbers[r], "non-finite value");
    if (r > 0 && !(d > trace.detuning.back())) {
      fail(path, t.line_numbers[r], "detuning_hz must be strictly increasing");
    }
    if (v < -1e-6 || v > 1.0 + 1e-6) {
      fail(path, t.line_numbers[r], "transmission " + format_double(v) + " outside [0, 1]");
    }
    trace.detuning.push_back(d);
    trace.transmission.push_back(v);
  }
  if (trace.detuning.size() < 5) {
    throw IoError(path.string() + ": trace needs at least 5 points, found " +
                  std::to_string(trace.detuning.size()));
  }
  trace = to_amplitude(std::move(trace));
  validate_trace(trace);
  return trace;
}

void write_trace(const fs::path& path, const TransmissionTrace& trace) {
  auto os = open_out(path);
  os << "detuning_hz,transmission\n";
  for (std::size_t i = 0; i < trace.detuning.size(); ++i) {
    os << format_double(trace.detuning[i]) << ',' << format_double(trace.transmission[i]) << '\n';
  }
}

NoiseSpectrum read_spectrum(const fs::path& path) {
  const CsvTable t = read_csv(path);
  require_columns(t, path, {"frequency_hz", "noise_db"});
  const auto cf = static_cast<std::size_t>(t.column("frequency_hz"));
  const auto cn = static_cast<std::size_t>(t.column("noise_db"));
  const int cv = t.column("valid");
  NoiseSpectrum s;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double f = t.rows[r][cf];
    const double n = t.rows[r][cn];
    if (!std::isfinite(f) || !std::isfinite(n)) fail(path, t.line_numbers[r], "non-finite value");
    if (r > 0 && !(f > s.frequencies.back())) {
      fail(path, t.line_numbers[r], "frequency_hz must be strictly increasing");
    }
    s.frequencies.push_back(f);
    s.noise_db.push_back(n);
    if (cv >= 0) {
      const double m = t.rows[r][static_cast<std::size_t>(cv)];
      if (m != 0.0 && m != 1.0) fail(path, t.line_numbers[r], "valid must be 0 or 1");
      s.valid.push_back(m == 1.0);
    }
  }
  if (s.frequencies.empty()) throw IoError(path.string() + ": spectrum has no rows");
  for (const std::string& c : t.comments) {
    if (c.rfind("label:", 0) == 0) s.label = trim(c.substr(6));
    if (c.rfind("lo_strategy:", 0) == 0) s.lo_strategy = trim(c.substr(12));
  }
  return s;
}

void write_spectrum(const fs::path& path, const NoiseSpectrum& s) {
  auto os = open_out(path);
  if (!s.label.empty()) os << "# label: " << s.label << '\n';
  if (!s.lo_strategy.empty()) os << "# lo_strategy: " << s.lo_strategy << '\n';
  const bool masked = !s.valid.empty();
  os << (masked ? "frequency_hz,noise_db,valid\n" : "frequency_hz,noise_db\n");
  for (std::size_t i = 0; i < s.frequencies.size(); ++i) {
    os << format_double(s.frequencies[i]) << ',' << format_double(s.noise_db[i]);
    if (masked) os << ',' << (s.valid[i] ? '1' : '0');
    os << '\n';
  }
}

SampledCurve read_phase_table(const fs::path& path) {
  const CsvTable t = read_csv(path);
  require_columns(t, path, {"frequency_hz", "theta_rad"});
  const auto cf = static_cast<std::size_t>(t.column("frequency_hz"));
  const auto ct = static_cast<std::size_t>(t.column("theta_rad"));
  SampledCurve c;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r > 0 && !(t.rows[r][cf] > c.x.back())) {
      fail(path, t.line_numbers[r], "frequency_hz must be strictly increasing");
    }
    c.x.push_back(t.rows[r][cf]);
    c.y.push_back(t.rows[r][ct]);
  }
  if (c.x.size() < 2) throw IoError(path.string() + ": phase table needs at least 2 rows");
  return c;
}

void write_phase_table(const fs::path& path, const std::vector<double>& frequency,
                       const std::vector<double>& theta) {
  auto os = open_out(path);
  os << "frequency_hz,theta_rad\n";
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    os << format_double(frequency[i]) << ',' << format_double(theta[i]) << '\n';
  }
}

void write_surface(const fs::path& path, const PhaseScanResult& scan) {
  auto os = open_out(path);
  os << "theta_rad,frequency_hz,noise_db\n";
  for (std::size_t j = 0; j < scan.thetas.size(); ++j) {
    for (std::size_t i = 0; i < scan.frequencies.size(); ++i) {
      os << format_double(scan.thetas[j]) << ',' << format_double(scan.frequencies[i]) << ','
         << format_double(scan.at(j, i)) << '\n';
    }
  }
}

InputNoiseSpec read_input_table(const fs::path& path) {
  const CsvTable t = read_csv(path);
  require_columns(t, path, {"frequency_hz", "v_min_db", "v_max_db", "angle_rad"});
  std::vector<double> f, lo, hi, ang;
  const auto cf = static_cast<std::size_t>(t.column("frequency_hz"));
  const auto cl = static_cast<std::size_t>(t.column("v_min_db"));
  const auto ch = static_cast<std::size_t>(t.column("v_max_db"));
  const auto ca = static_cast<std::size_t>(t.column("angle_rad"));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!(t.rows[r][cl] <= t.rows[r][ch])) fail(path, t.line_numbers[r], "v_min_db exceeds v_max_db");
    if (r > 0 && !(t.rows[r][cf] > f.back())) {
      fail(path, t.line_numbers[r], "frequency_hz must be strictly increasing");
    }
    f.push_back(t.rows[r][cf]);
    lo.push_back(t.rows[r][cl]);
    hi.push_back(t.rows[r][ch]);
    ang.push_back(t.rows[r][ca]);
  }
  if (f.size() < 2) throw IoError(path.string() + ": input noise table needs at least 2 rows");
  return InputNoiseSpec::table(std::move(f), std::move(lo), std::move(hi), std::move(ang));
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
}

}  // namespace sqzf::io
