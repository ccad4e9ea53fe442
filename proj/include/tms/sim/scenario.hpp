#pragma once

#include "tms/data/road_graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tms::sim {

struct VehiclePlan {
    std::string vehicle_id;
    double speed_mps = 0.0;    // travel and reported speed
    std::int64_t period_ms = 1000;
    std::vector<std::string> waypoints; // node ids; a single node means stationary
    std::optional<double> disconnect_at_s;
};

struct Expectation {
    std::string vehicle_id;
    enum class Kind { Advisories, Warnings } kind = Kind::Advisories;
    std::size_t min_count = 0;
};

/// A scripted fleet run. File format, one record per line, '#' comments:
///   map PATH
///   duration SECONDS
///   vehicle ID SPEED_MPS PERIOD_MS WPT1,WPT2,... [DISCONNECT_AT_S]
///   expect ID advisories MIN_COUNT
///   expect ID warnings MIN_COUNT
struct Scenario {
    std::string map_path;
    double duration_s = 0.0;
    std::vector<VehiclePlan> vehicles;
    std::vector<Expectation> expectations;
};

/// Throws TmsError{ParseError}. The map path is resolved relative to the
/// scenario file's directory.
Scenario load_scenario(const std::string& path);

/// Checks that every waypoint exists; throws ValidationError.
void validate_scenario(const Scenario& scenario, const data::RoadGraph& map);

} // namespace tms::sim
