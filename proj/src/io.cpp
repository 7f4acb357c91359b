// Copyright 2026 the oqfi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqfi/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace oqfi {

using nlohmann::json;

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double frac = double(i) / double(count - 1);
    if (log_scale)
      out.push_back(start * std::pow(stop / start, frac));
    else
      out.push_back(start + frac * (stop - start));
  }
  return out;
}

void GridSpec::validate() const {
  if (count < 1) throw ConfigError("grid: count must be >= 1");
  if (!(start < stop)) throw ConfigError("grid: requires start < stop");
  if (log_scale && start <= 0.0)
    throw ConfigError("grid: log scale requires start > 0");
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4)
    throw ConfigError("grid '" + text + "': expected start:stop:count[:lin|log]");
  GridSpec spec;
  try {
    spec.start = std::stod(parts[0]);
    spec.stop = std::stod(parts[1]);
    spec.count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("grid '" + text + "': malformed number");
  }
  if (parts.size() == 4) {
    if (parts[3] == "log")
      spec.log_scale = true;
    else if (parts[3] != "lin")
      throw ConfigError("grid '" + text + "': scale must be lin or log");
  }
  spec.validate();
  return spec;
}

namespace {

Complex parse_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("complex entries must be numbers or [re, im] pairs");
}

CMatrix parse_matrix(const json& j, Index dim) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    throw ConfigError("matrix must have " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      throw ConfigError("matrix row has wrong length");
    for (Index c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c]);
  }
  return m;
}

OperatorFamily parse_family(const json& j, Index dim) {
  OperatorFamily fam;
  if (j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() &&
      j[0][0].is_array() && !j[0][0].empty() && j[0][0][0].is_array()) {
    // list of coefficient matrices
    for (const json& coeff : j) fam.coeffs.push_back(parse_matrix(coeff, dim));
  } else if (j.is_object() && j.contains("coeffs")) {
    for (const json& coeff : j["coeffs"])
      fam.coeffs.push_back(parse_matrix(coeff, dim));
  } else {
    // single constant matrix
    fam.coeffs.push_back(parse_matrix(j, dim));
  }
  return fam;
}

GridSpec parse_grid_json(const json& j) {
  if (j.is_string()) return parse_grid(j.get<std::string>());
  GridSpec spec;
  spec.start = j.at("start").get<double>();
  spec.stop = j.at("stop").get<double>();
  spec.count = j.at("count").get<int>();
  if (j.contains("scale")) {
    const std::string scale = j["scale"].get<std::string>();
    if (scale == "log")
      spec.log_scale = true;
    else if (scale != "lin")
      throw ConfigError("grid scale must be lin or log");
  }
  spec.validate();
  return spec;
}

}  // namespace

QModel RunConfig::make_model() const {
  if (explicit_model) return *explicit_model;
  if (builtin) return instantiate(*builtin);
  throw ConfigError("config: no model given");
}

CVector RunConfig::make_chi(Index dim) const {
  if (chi.size() == 0) {
    CVector uniform = CVector::Constant(dim, Complex(1.0, 0.0));
    return uniform / uniform.norm();
  }
  if (chi.size() != dim)
    throw ConfigError("config: chi has dimension " + std::to_string(chi.size()) +
                      ", model needs " + std::to_string(dim));
  const double norm = chi.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw ConfigError("config: chi norm deviates from 1 by more than 1e-6");
  return chi / norm;  // renormalize sub-1e-6 deviations (with a warning upstream)
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.config_hash = hex64(fnv1a(j.dump()));

  if (!j.contains("model")) throw ConfigError("config: missing 'model'");
  const json& jm = j["model"];
  if (jm.is_string()) {
    cfg.builtin = builtin_defaults(jm.get<std::string>());
  } else if (jm.contains("builtin")) {
    BuiltinSpec spec;
    spec.name = jm["builtin"].get<std::string>();
    builtin_defaults(spec.name);  // validates the name
    if (jm.contains("params"))
      for (auto it = jm["params"].begin(); it != jm["params"].end(); ++it)
        spec.parameters[it.key()] = it.value().get<double>();
    cfg.builtin = spec;
  } else if (jm.contains("dim")) {
    QModel model;
    model.dim = jm["dim"].get<Index>();
    if (model.dim < 1) throw ConfigError("config: model dim must be >= 1");
    if (!jm.contains("hamiltonian") || !jm.contains("jumps"))
      throw ConfigError("config: explicit model needs 'hamiltonian' and 'jumps'");
    model.hamiltonian = parse_family(jm["hamiltonian"], model.dim);
    for (const json& jump : jm["jumps"])
      model.jumps.push_back(parse_family(jump, model.dim));
    if (jm.contains("phase_channel") && !jm["phase_channel"].is_null())
      model.phase_channel = jm["phase_channel"].get<int>();
    try {
      model.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.explicit_model = model;
  } else {
    throw ConfigError("config: 'model' must be a builtin name or explicit model");
  }

  if (j.contains("g")) cfg.g = j["g"].get<double>();
  if (j.contains("chi")) {
    const json& jc = j["chi"];
    cfg.chi.resize(jc.size());
    for (size_t i = 0; i < jc.size(); ++i)
      cfg.chi(static_cast<Index>(i)) = parse_complex(jc[i]);
  }
  if (j.contains("t_grid")) cfg.t_grid = parse_grid_json(j["t_grid"]);
  if (j.contains("s_grid")) cfg.s_grid = parse_grid_json(j["s_grid"]);
  if (j.contains("g_grid")) cfg.g_grid = parse_grid_json(j["g_grid"]);
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("t")) cfg.t = j["t"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_traj")) cfg.n_traj = j["n_traj"].get<long>();
  if (j.contains("window")) cfg.window = j["window"].get<double>();
  if (j.contains("max_order")) cfg.max_order = j["max_order"].get<int>();
  if (j.contains("oracle_steps"))
    cfg.oracle_steps = j["oracle_steps"].get<std::vector<int>>();
  if (j.contains("stencil")) {
    const json& js = j["stencil"];
    if (js.contains("h")) {
      cfg.stencil.h = js["h"].get<double>();
      if (cfg.stencil.h <= 0.0)
        throw ConfigError("config: stencil.h must be > 0");
    }
    if (js.contains("richardson"))
      cfg.stencil.richardson = js["richardson"].get<bool>();
    if (js.contains("max_halvings")) {
      cfg.stencil.max_halvings = js["max_halvings"].get<int>();
      if (cfg.stencil.max_halvings < 0)
        throw ConfigError("config: stencil.max_halvings must be >= 0");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void Table::meta(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}

void Table::meta(const std::string& key, double value) {
  metadata.emplace_back(key, format_double(value));
}

namespace {

// RFC-4180 quoting; our cells are plain numbers or short tokens, so this
// only triggers for free-text metadata echoed into the body.
std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char ch : cell) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (const auto& [key, value] : table.metadata)
    os << "# " << key << ": " << value << "\n";
  for (size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << csv_escape(table.columns[c]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << csv_escape(row[c]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table) {
  json j;
  j["metadata"] = json::object();
  for (const auto& [key, value] : table.metadata) j["metadata"][key] = value;
  j["columns"] = table.columns;
  j["rows"] = json::array();
  for (const auto& row : table.rows) j["rows"].push_back(row);
  os << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace oqfi
