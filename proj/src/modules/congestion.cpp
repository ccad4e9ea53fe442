#include "tms/modules/congestion.hpp"

#include "tms/modules/params.hpp"
#include "tms/proto/handler.hpp"
#include "tms/util/geo.hpp"
#include "tms/util/log.hpp"

#include <limits>
#include <vector>

namespace tms::modules {

void CongestionModule::init(kernel::KernelApi& api, const kernel::ModuleSpec& spec)
{
    api_ = &api;
    window_seconds_ = param_double(spec, "window_seconds", 60.0);
    slow_speed_threshold_ = param_double(spec, "slow_speed_threshold_mps", 3.0);
    penalty_factor_ = param_double(spec, "penalty_factor", 2.0);
    match_radius_m_ = param_double(spec, "match_radius_m", 100.0);
    if (window_seconds_ <= 0.0) {
        throw ValidationError("window_seconds", "must be > 0");
    }
    if (slow_speed_threshold_ <= 0.0) {
        throw ValidationError("slow_speed_threshold_mps", "must be > 0");
    }
    if (penalty_factor_ < 1.0) {
        throw ValidationError("penalty_factor", "must be >= 1");
    }
    if (match_radius_m_ <= 0.0) {
        throw ValidationError("match_radius_m", "must be > 0");
    }
    if (api.cartography() == nullptr) {
        throw ValidationError("map", "congestion module requires a road graph (--map)");
    }
}

void CongestionModule::on_event(const event::EventDescriptor& ev)
{
    const auto* msg = std::any_cast<proto::Message>(&ev.payload());
    if (msg == nullptr || msg->type != proto::MsgType::Telemetry) {
        return;
    }
    const auto& body = std::get<proto::TelemetryBody>(msg->body);
    const auto now_ms = static_cast<std::int64_t>(body.timestamp_ms);
    apply_decay(now_ms);

    if (body.speed_mps >= slow_speed_threshold_) {
        return;
    }

    auto& graph = *api_->cartography();
    const geo::LatLon position{body.latitude, body.longitude};

    // Every directed edge at the minimal distance is penalized; a probe on a
    // two-way segment cannot tell the directions apart.
    double min_distance = std::numeric_limits<double>::infinity();
    std::vector<data::RoadGraph::EdgeView> nearest;
    for (const auto& edge : graph.edges()) {
        const auto a = graph.node_position(edge.from);
        const auto b = graph.node_position(edge.to);
        if (!a || !b) {
            continue;
        }
        const double d = geo::point_segment_distance_m(position, *a, *b);
        if (d < min_distance) {
            min_distance = d;
            nearest.assign(1, edge);
        } else if (d == min_distance) {
            nearest.push_back(edge);
        }
    }
    if (nearest.empty() || min_distance > match_radius_m_) {
        log::debug("slow report from '", ev.source_target(), "' matches no edge within ",
                   match_radius_m_, " m");
        return;
    }

    std::lock_guard lock(mu_);
    for (const auto& edge : nearest) {
        graph.update_edge_weight(edge.from, edge.to, edge.base_seconds * penalty_factor_);
        last_slow_report_ms_[{edge.from, edge.to}] = now_ms;
        log::debug("congestion: edge ", edge.from, " -> ", edge.to, " now ",
                   edge.base_seconds * penalty_factor_, " s (probe '", ev.source_target(), "')");
    }
}

void CongestionModule::apply_decay(std::int64_t now_ms)
{
    const auto window_ms = static_cast<std::int64_t>(window_seconds_ * 1000.0);
    auto& graph = *api_->cartography();
    std::lock_guard lock(mu_);
    for (auto it = last_slow_report_ms_.begin(); it != last_slow_report_ms_.end();) {
        if (now_ms - it->second > window_ms) {
            const auto base = graph.edge_base(it->first.first, it->first.second);
            if (base) {
                graph.update_edge_weight(it->first.first, it->first.second, *base);
                log::debug("congestion cleared: edge ", it->first.first, " -> ",
                           it->first.second, " back to ", *base, " s");
            }
            it = last_slow_report_ms_.erase(it);
        } else {
            ++it;
        }
    }
}

} // namespace tms::modules
