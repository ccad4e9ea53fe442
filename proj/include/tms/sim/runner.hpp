#pragma once

#include "tms/sim/vehicle_client.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tms::sim {

struct ExpectationResult {
    Expectation expectation;
    std::size_t observed = 0;
    bool passed = false;
};

struct ScenarioReport {
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    std::vector<VehicleRunResult> vehicles; // ordered by vehicle id
    std::vector<ExpectationResult> expectations;
    bool all_passed = false;

    std::size_t total_telemetry_sent() const;

    /// Line-delimited text for diff-based assertions.
    std::string to_text() const;
};

/// Runs every vehicle on its own thread against a live server and checks the
/// scenario expectations. Throws TmsError{ConnectError} when the server is
/// unreachable and ValidationError for waypoints missing from the map. When
/// report_path is non-empty the report text is also written there.
ScenarioReport run_scenario(const Scenario& scenario, const std::string& host,
                            std::uint16_t port, std::uint64_t seed,
                            const std::string& report_path = {});

} // namespace tms::sim
