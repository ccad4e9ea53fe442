#pragma once

#include "tms/data/road_graph.hpp"
#include "tms/proto/message.hpp"
#include "tms/sim/scenario.hpp"
#include "tms/util/geo.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tms::sim {

/// Time source for simulated vehicles. The wall clock drives live runs; the
/// manual clock makes transcripts reproducible in tests.
class SimClock {
public:
    virtual ~SimClock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_until_ms(std::int64_t deadline_ms) = 0;
};

class WallClock : public SimClock {
public:
    std::int64_t now_ms() override;
    void sleep_until_ms(std::int64_t deadline_ms) override;
};

/// Advances only via sleep_until_ms; now() starts at 0.
class ManualClock : public SimClock {
public:
    std::int64_t now_ms() override { return now_; }
    void sleep_until_ms(std::int64_t deadline_ms) override
    {
        if (deadline_ms > now_) {
            now_ = deadline_ms;
        }
    }

private:
    std::int64_t now_ = 0;
};

struct VehicleRunResult {
    std::string vehicle_id;
    std::size_t telemetry_sent = 0;
    std::vector<std::vector<std::string>> advisories; // node lists, arrival order
    std::vector<std::string> warnings;                // warning texts
    std::size_t other_inbound = 0;
    bool disconnected_early = false;
    /// Marshaled outbound frames in send order (login plus telemetry).
    std::vector<std::vector<std::uint8_t>> outbound_transcript;
};

/// Interpolated position along the plan's waypoints after `elapsed_s`
/// seconds at the plan speed; stationary plans stay at the first waypoint.
geo::LatLon plan_position(const VehiclePlan& plan, const data::RoadGraph& map,
                          double elapsed_s);

/// One scripted RVTP client: logs in, streams TELEMETRY at the plan period
/// while recording every inbound advisory and warning. Deterministic under a
/// ManualClock: identical plan and seed give a byte-identical transcript.
/// Throws TmsError{ConnectError} when the server is unreachable.
VehicleRunResult run_simulated_vehicle(const VehiclePlan& plan, const data::RoadGraph& map,
                                       const std::string& host, std::uint16_t port,
                                       double duration_s, SimClock& clock,
                                       std::uint64_t seed);

} // namespace tms::sim
