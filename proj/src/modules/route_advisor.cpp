#include "tms/modules/route_advisor.hpp"

#include "tms/util/error.hpp"
#include "tms/util/geo.hpp"
#include "tms/util/log.hpp"

#include <limits>

namespace tms::modules {

namespace {

constexpr const char* kDestinationPrefix = "destination.";
constexpr std::uint8_t kUnreachableSeverity = 1;

} // namespace

void RouteAdvisorModule::init(kernel::KernelApi& api, const kernel::ModuleSpec& spec)
{
    api_ = &api;
    if (api.cartography() == nullptr) {
        throw ValidationError("map", "route advisor requires a road graph (--map)");
    }
    for (const auto& [key, value] : spec.params) {
        if (key.rfind(kDestinationPrefix, 0) != 0) {
            continue;
        }
        const std::string vehicle_id = key.substr(std::string(kDestinationPrefix).size());
        if (vehicle_id.empty() || value.empty()) {
            throw ValidationError(key, "expected destination.<vehicle_id> = <node_id>");
        }
        if (!api.cartography()->has_node(value)) {
            throw ValidationError(key, "destination node '" + value + "' not in the map");
        }
        destinations_[vehicle_id] = value;
    }
}

std::optional<std::string> RouteAdvisorModule::nearest_node(double latitude,
                                                            double longitude) const
{
    const geo::LatLon position{latitude, longitude};
    double best_distance = std::numeric_limits<double>::infinity();
    std::optional<std::string> best;
    for (const auto& node_id : api_->cartography()->node_ids()) {
        const auto node_pos = api_->cartography()->node_position(node_id);
        if (!node_pos) {
            continue;
        }
        const double d = geo::distance_m(position, *node_pos);
        if (d < best_distance || (d == best_distance && best && node_id < *best)) {
            best_distance = d;
            best = node_id;
        }
    }
    return best;
}

void RouteAdvisorModule::on_event(const event::EventDescriptor& ev)
{
    const auto* msg = std::any_cast<proto::Message>(&ev.payload());
    if (msg == nullptr || msg->type != proto::MsgType::Telemetry) {
        return;
    }
    const auto destination = destinations_.find(ev.source_target());
    if (destination == destinations_.end()) {
        return;
    }
    const auto& body = std::get<proto::TelemetryBody>(msg->body);
    const auto origin = nearest_node(body.latitude, body.longitude);
    if (!origin) {
        return;
    }

    const auto route = api_->cartography()->shortest_route(*origin, destination->second);

    std::lock_guard lock(mu_);
    auto& memory = last_advice_[ev.source_target()];
    if (!route) {
        if (memory.warned_unreachable) {
            return;
        }
        memory.warned_unreachable = true;
        memory.has_route = false;
        memory.route.clear();
        api_->send_to_vehicle(ev.source_target(),
                              proto::make_warning(ev.source_target(), kUnreachableSeverity,
                                                  "no route from " + *origin + " to " +
                                                      destination->second));
        log::warn("vehicle '", ev.source_target(), "': destination '", destination->second,
                  "' unreachable from '", *origin, "'");
        return;
    }
    memory.warned_unreachable = false;
    if (memory.has_route && memory.route == route->nodes) {
        return;
    }
    memory.has_route = true;
    memory.route = route->nodes;
    const auto status = api_->send_to_vehicle(
        ev.source_target(), proto::make_route_advisory(ev.source_target(), route->nodes));
    if (status != comms::SendStatus::Ok) {
        log::warn("route advisory to '", ev.source_target(),
                  "' not delivered: ", comms::send_status_name(status));
    }
}

} // namespace tms::modules
