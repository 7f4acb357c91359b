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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oqfi/models.hpp"
#include "oqfi/stencil.hpp"

namespace oqfi {

inline constexpr const char* kToolVersion = "0.1.0";

/// Inclusive grid start:stop:count with linear or log spacing.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log_scale = false;

  std::vector<double> points() const;
  void validate() const;  // throws ConfigError
};

/// Parse "a:b:n" or "a:b:n:lin|log".
GridSpec parse_grid(const std::string& text);

/// Run configuration shared by all CLI subcommands.  Matrices are given
/// as row-lists of [re, im] pairs; operator families as ordered
/// coefficient-matrix lists; complex state amplitudes as [re, im].
struct RunConfig {
  std::optional<BuiltinSpec> builtin;
  std::optional<QModel> explicit_model;
  double g = 0.0;
  CVector chi;  // empty: uniform superposition over the basis
  std::optional<GridSpec> t_grid;
  std::optional<GridSpec> s_grid;
  std::optional<GridSpec> g_grid;
  StencilConfig stencil;
  std::uint64_t seed = 1;
  long n_traj = 1000;
  double t = 10.0;
  double window = 0.0;  // 0: auto
  int max_order = 4;
  std::vector<int> oracle_steps = {4, 8, 16};
  std::string out_path;     // default output target; CLI --out overrides
  std::string config_hash;  // FNV-1a of the canonical config text

  QModel make_model() const;
  CVector make_chi(Index dim) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Self-describing output table: '#'-prefixed metadata block, then an
/// RFC-4180 body with '.' decimal points; complex values as re,im column
/// pairs.  The timestamp is isolated on its own metadata line so that
/// outputs are byte-identical apart from it.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
};

void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);

std::string format_double(double v);  // shortest round-trip decimal
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

}  // namespace oqfi
