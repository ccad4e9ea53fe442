#pragma once

#include "tms/kernel/kernel.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tms::modules {

/// Sends each vehicle the shortest route from its nearest graph node to its
/// configured destination, recomputed on every telemetry event. Declares a
/// dependency on the congestion module in the configuration so it always
/// sees updated edge weights for the event it handles. Consecutive identical
/// routes are not re-sent; an unreachable destination produces a WARNING
/// (also deduplicated until the situation changes).
///
/// Params: one "destination.<vehicle_id>" entry per advised vehicle.
class RouteAdvisorModule : public kernel::DecisionModule {
public:
    void init(kernel::KernelApi& api, const kernel::ModuleSpec& spec) override;
    void on_event(const event::EventDescriptor& ev) override;

private:
    std::optional<std::string> nearest_node(double latitude, double longitude) const;

    kernel::KernelApi* api_ = nullptr;
    std::map<std::string, std::string> destinations_; // vehicle id -> node id

    struct AdviceMemory {
        bool warned_unreachable = false;
        bool has_route = false;
        std::vector<std::string> route;
    };

    std::mutex mu_;
    std::map<std::string, AdviceMemory> last_advice_;
};

} // namespace tms::modules
