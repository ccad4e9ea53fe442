#include "tms/modules/builtin.hpp"

#include "tms/modules/congestion.hpp"
#include "tms/modules/fleet_logger.hpp"
#include "tms/modules/proxy_stub.hpp"
#include "tms/modules/route_advisor.hpp"

namespace tms::modules {

void register_builtin_factories(kernel::ModuleFactoryRegistry& registry)
{
    registry.register_factory("congestion", [](const kernel::ModuleSpec&) {
        return std::make_unique<CongestionModule>();
    });
    registry.register_factory("route_advisor", [](const kernel::ModuleSpec&) {
        return std::make_unique<RouteAdvisorModule>();
    });
    registry.register_factory("fleet_logger", [](const kernel::ModuleSpec&) {
        return std::make_unique<FleetLoggerModule>();
    });
    registry.register_factory("proxy_stub", [](const kernel::ModuleSpec&) {
        return std::make_unique<ProxyStubModule>();
    });
}

} // namespace tms::modules
