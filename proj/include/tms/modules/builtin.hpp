#pragma once

#include "tms/kernel/kernel.hpp"

namespace tms::modules {

/// Registers the bundled decision-module factories: "congestion",
/// "route_advisor", "fleet_logger" and "proxy_stub".
void register_builtin_factories(kernel::ModuleFactoryRegistry& registry);

} // namespace tms::modules
