#pragma once

#include <string>
#include <vector>

#include "habitat/scenario.hpp"

namespace habitat {

/// Built-in problem instances mirroring the simulation studies shipped with
/// the toolkit (seasonal optimum, shifted and enlarging habitats, the
/// no-selection benchmark, and the phase-diagram templates).
struct NamedScenario {
    std::string name;
    std::string description;
    Scenario scenario;
};

const std::vector<NamedScenario>& scenario_library();

/// Lookup by name; throws std::invalid_argument listing the known names.
Scenario scenario_by_name(const std::string& name);

} // namespace habitat
