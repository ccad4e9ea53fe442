#include "tms/sim/vehicle_client.hpp"

#include "tms/net/socket.hpp"
#include "tms/proto/codec.hpp"
#include "tms/util/error.hpp"
#include "tms/util/log.hpp"
#include "tms/util/time.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

namespace tms::sim {

std::int64_t WallClock::now_ms()
{
    return util::now_ms();
}

void WallClock::sleep_until_ms(std::int64_t deadline_ms)
{
    const std::int64_t delta = deadline_ms - now_ms();
    if (delta > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delta));
    }
}

geo::LatLon plan_position(const VehiclePlan& plan, const data::RoadGraph& map, double elapsed_s)
{
    std::vector<geo::LatLon> points;
    points.reserve(plan.waypoints.size());
    for (const auto& waypoint : plan.waypoints) {
        const auto position = map.node_position(waypoint);
        if (!position) {
            throw ValidationError("waypoints", "node '" + waypoint + "' not in the map");
        }
        points.push_back(*position);
    }
    return geo::position_along(points, plan.speed_mps * std::max(elapsed_s, 0.0));
}

VehicleRunResult run_simulated_vehicle(const VehiclePlan& plan, const data::RoadGraph& map,
                                       const std::string& host, std::uint16_t port,
                                       double duration_s, SimClock& clock, std::uint64_t seed)
{
    (void)seed; // reserved for future channel/jitter models; recorded in reports

    VehicleRunResult result;
    result.vehicle_id = plan.vehicle_id;

    net::Socket socket = net::Socket::connect_to(host, port);

    // Inbound side runs concurrently with the telemetry ticks and stops when
    // the socket is shut down.
    std::mutex inbound_mu;
    std::thread reader([&socket, &inbound_mu, &result] {
        try {
            for (;;) {
                auto msg = proto::read_frame(socket);
                if (!msg) {
                    return;
                }
                std::lock_guard lock(inbound_mu);
                switch (msg->type) {
                case proto::MsgType::RouteAdvisory:
                    result.advisories.push_back(
                        std::get<proto::RouteAdvisoryBody>(msg->body).nodes);
                    break;
                case proto::MsgType::Warning:
                    result.warnings.push_back(std::get<proto::WarningBody>(msg->body).text);
                    break;
                default:
                    ++result.other_inbound;
                    break;
                }
            }
        } catch (const TmsError& e) {
            log::debug("vehicle '", result.vehicle_id, "' reader stopped: ", e.what());
        } catch (const std::system_error& e) {
            log::debug("vehicle '", result.vehicle_id, "' reader stopped: ", e.what());
        }
    });

    const auto send_recorded = [&socket, &result](const proto::Message& msg) {
        auto frame = proto::marshal_frame(msg);
        socket.write_all(frame.data(), frame.size());
        result.outbound_transcript.push_back(std::move(frame));
    };

    const std::int64_t start_ms = clock.now_ms();
    const auto duration_ms = static_cast<std::int64_t>(duration_s * 1000.0);
    const std::int64_t disconnect_ms =
        plan.disconnect_at_s ? static_cast<std::int64_t>(*plan.disconnect_at_s * 1000.0)
                             : duration_ms + 1;

    try {
        send_recorded(proto::make_login(plan.vehicle_id));

        for (std::int64_t tick = 0;; ++tick) {
            const std::int64_t elapsed = tick * plan.period_ms;
            if (elapsed > duration_ms) {
                break;
            }
            if (elapsed >= disconnect_ms) {
                clock.sleep_until_ms(start_ms + disconnect_ms);
                result.disconnected_early = true;
                break;
            }
            clock.sleep_until_ms(start_ms + elapsed);
            const auto position = plan_position(plan, map, static_cast<double>(elapsed) / 1000.0);
            send_recorded(proto::make_telemetry(
                plan.vehicle_id, static_cast<std::uint64_t>(start_ms + elapsed), position.lat,
                position.lon, plan.speed_mps));
            ++result.telemetry_sent;
        }

        if (!result.disconnected_early) {
            // Stay connected (and listening) until the scenario ends.
            clock.sleep_until_ms(start_ms + duration_ms);
        }
    } catch (const std::system_error& e) {
        log::warn("vehicle '", plan.vehicle_id, "' connection lost: ", e.what());
    }

    socket.shutdown_both();
    reader.join();
    return result;
}

} // namespace tms::sim
