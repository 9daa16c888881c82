// =============================================================================
// wavectl - fixtures: the five published rig scenarios and controllers
// =============================================================================

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavectl/scenario.hpp"
#include "wavectl/ssmodel.hpp"

namespace wavectl::fixtures {

/// Names of the built-in scenarios, ordered gray, blue, magenta, red, green
/// (one per stability zone of the derived (q, alpha) pair).
std::vector<std::string> scenario_names();

/// Built-in scenario by name; throws Error for unknown names.
ScenarioParams scenario(const std::string& name);

/// Fifth-order certified controller for the gray scenario.
Controller K_gray();

/// Fifth-order certified controller for the blue scenario.
Controller K_blue();

/// Published sector slopes (q_l, q_u) accompanying the certified
/// controllers; available for gray and blue.
std::pair<double, double> published_sector(const std::string& name);

/// Scenario JSON (de)serialization; keys match the field names.
std::string scenario_to_json(const ScenarioParams& sp);
ScenarioParams scenario_from_json(const std::string& text);
ScenarioParams scenario_from_file(const std::string& path);

}  // namespace wavectl::fixtures
