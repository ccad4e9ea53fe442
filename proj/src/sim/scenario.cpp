#include "tms/sim/scenario.hpp"

#include "tms/util/error.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tms::sim {

namespace {

std::vector<std::string> split_csv(const std::string& csv)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(csv);
    while (std::getline(in, part, ',')) {
        parts.push_back(part);
    }
    return parts;
}

} // namespace

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw TmsError(Errc::ParseError, "cannot open scenario file '" + path + "'");
    }

    Scenario scenario;
    std::set<std::string> vehicle_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string kind;
        if (!(fields >> kind)) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        if (kind == "map") {
            if (!(fields >> scenario.map_path)) {
                throw TmsError(Errc::ParseError, where + ": expected 'map PATH'");
            }
        } else if (kind == "duration") {
            if (!(fields >> scenario.duration_s) || scenario.duration_s <= 0.0) {
                throw TmsError(Errc::ParseError, where + ": expected 'duration SECONDS' > 0");
            }
        } else if (kind == "vehicle") {
            VehiclePlan plan;
            std::string waypoint_csv;
            if (!(fields >> plan.vehicle_id >> plan.speed_mps >> plan.period_ms >>
                  waypoint_csv)) {
                throw TmsError(Errc::ParseError,
                               where + ": expected 'vehicle ID SPEED PERIOD_MS WPTS[,..]'");
            }
            double disconnect_at = 0.0;
            if (fields >> disconnect_at) {
                plan.disconnect_at_s = disconnect_at;
            }
            plan.waypoints = split_csv(waypoint_csv);
            if (plan.vehicle_id.empty() || plan.waypoints.empty()) {
                throw TmsError(Errc::ParseError, where + ": vehicle needs an id and waypoints");
            }
            if (plan.period_ms <= 0) {
                throw TmsError(Errc::ParseError, where + ": telemetry period must be > 0");
            }
            if (plan.speed_mps < 0.0) {
                throw TmsError(Errc::ParseError, where + ": speed must be >= 0");
            }
            if (!vehicle_ids.insert(plan.vehicle_id).second) {
                throw TmsError(Errc::ParseError,
                               where + ": duplicate vehicle '" + plan.vehicle_id + "'");
            }
            scenario.vehicles.push_back(std::move(plan));
        } else if (kind == "expect") {
            Expectation expect;
            std::string what;
            if (!(fields >> expect.vehicle_id >> what >> expect.min_count)) {
                throw TmsError(Errc::ParseError,
                               where + ": expected 'expect ID advisories|warnings N'");
            }
            if (what == "advisories") {
                expect.kind = Expectation::Kind::Advisories;
            } else if (what == "warnings") {
                expect.kind = Expectation::Kind::Warnings;
            } else {
                throw TmsError(Errc::ParseError, where + ": unknown expectation '" + what + "'");
            }
            scenario.expectations.push_back(std::move(expect));
        } else {
            throw TmsError(Errc::ParseError, where + ": unknown record '" + kind + "'");
        }
    }

    if (scenario.map_path.empty()) {
        throw TmsError(Errc::ParseError, path + ": missing 'map' record");
    }
    if (scenario.duration_s <= 0.0) {
        throw TmsError(Errc::ParseError, path + ": missing 'duration' record");
    }
    if (scenario.vehicles.empty()) {
        throw TmsError(Errc::ParseError, path + ": no vehicles");
    }

    const auto base = std::filesystem::path(path).parent_path();
    if (!base.empty() && std::filesystem::path(scenario.map_path).is_relative()) {
        scenario.map_path = (base / scenario.map_path).string();
    }
    return scenario;
}

void validate_scenario(const Scenario& scenario, const data::RoadGraph& map)
{
    for (const auto& plan : scenario.vehicles) {
        for (const auto& waypoint : plan.waypoints) {
            if (!map.has_node(waypoint)) {
                throw ValidationError("waypoints", "vehicle '" + plan.vehicle_id +
                                                       "': node '" + waypoint +
                                                       "' not in the map");
            }
        }
    }
}

} // namespace tms::sim
