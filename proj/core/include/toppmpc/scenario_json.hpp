// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include "toppmpc/simulation.hpp"

namespace toppmpc::io {

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario file schema (JSON): terrain block ("hills" or "footholds"),
/// optional config / initial-state blocks, mass, gravity, max_time, seed.
sim::Scenario scenario_from_json(const std::string& text);
sim::Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const sim::Scenario& scenario);

/// One JSON-lines record per control tick.
std::string tick_record_json(const sim::TickRecord& tick);

}  // namespace toppmpc::io
