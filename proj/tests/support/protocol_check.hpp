// Copyright 2026 The AWES-OCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cross-check of a configuration document against the machine-readable
// copy of the bound tables and the run protocol in tests/data.

#ifndef AWES_TESTS_SUPPORT_PROTOCOL_CHECK_HPP_
#define AWES_TESTS_SUPPORT_PROTOCOL_CHECK_HPP_

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "awes/config.hpp"
#include "support/testing.hpp"

namespace awes::testing {

using nlohmann::json;

inline json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  return json::parse(in);
}

inline json paper_tables() { return read_json(source_dir() / "tests" / "data" / "paper_tables.json"); }

/// Value at a dotted key path, or null.
inline json lookup(const json& doc, const std::string& dotted) {
  const json* node = &doc;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return *node;
}

/// Exact equality up to the last bit of a decimal round trip.
inline bool same_number(double a, double b) { return a == b || std::abs(a - b) <= 4e-16 * std::abs(b); }

/// Human-readable mismatches between `config` (a configuration document)
/// and the tables. Empty on success. `checked` counts compared values.
inline std::vector<std::string> protocol_mismatches(const json& config, int* checked = nullptr) {
  const json tables = paper_tables();
  std::vector<std::string> out;
  int count = 0;
  auto expect_number = [&](const std::string& key, const json& got, double want) {
    ++count;
    if (!got.is_number() || !same_number(got.get<double>(), want)) {
      out.push_back(key + ": expected " + json(want).dump() + ", got " + got.dump());
    }
  };
  for (const char* table : {"table_1", "table_2"}) {
    for (const json& row : tables[table]) {
      const std::string what = std::string(table) + " " + row["symbol"].get<std::string>();
      if (row["config_key"].is_object()) {
        for (const auto& [field, key] : row["config_key"].items()) {
          expect_number(what + " " + field, lookup(config, key.get<std::string>()), row[field].get<double>());
        }
        continue;
      }
      const std::string key = row["config_key"];
      const json pair = lookup(config, key);
      if (!pair.is_array() || pair.size() != 2) {
        out.push_back(what + ": " + key + " missing");
        count += 2;
        continue;
      }
      expect_number(what + " min", pair[0], row["min"].get<double>());
      expect_number(what + " max", pair[1], row["max"].get<double>());
    }
  }
  const json& p = tables["protocol"];
  expect_number("intervals", lookup(config, "mesh.intervals"), p["intervals"].get<double>());
  expect_number("horizon", lookup(config, "mesh.horizon"), p["horizon"].get<double>());
  expect_number("tether masses", lookup(config, "model.tether.masses"), p["tether_masses"].get<double>());
  expect_number("circle loops", lookup(config, "path.circle.loops"), p["circle_loops"].get<double>());
  expect_number("lemniscate loops", lookup(config, "path.lemniscate.loops"), p["lemniscate_loops"].get<double>());
  expect_number("v_ground", lookup(config, "model.environment.wind.v_ground"), p["v_ground"].get<double>());
  // h = T_f / N_t against the printed step at its printed precision.
  ++count;
  const json nt = lookup(config, "mesh.intervals"), tf = lookup(config, "mesh.horizon");
  if (nt.is_number() && tf.is_number()) {
    const double h = tf.get<double>() / nt.get<double>();
    const double half_unit = 0.5 * std::pow(10.0, -p["time_step_printed_digits"].get<int>());
    if (!(std::abs(h - p["time_step_printed"].get<double>()) < half_unit)) {
      out.push_back("time step " + json(h).dump() + " does not round to the printed value");
    }
  } else {
    out.push_back("mesh missing");
  }
  if (checked) *checked = count;
  return out;
}

}  // namespace awes::testing

#endif  // AWES_TESTS_SUPPORT_PROTOCOL_CHECK_HPP_
