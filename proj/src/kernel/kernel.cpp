#include "tms/kernel/kernel.hpp"

#include "tms/util/error.hpp"
#include "tms/util/log.hpp"

#include <algorithm>

namespace tms::kernel {

void ModuleFactoryRegistry::register_factory(const std::string& factory_id, ModuleFactory factory)
{
    if (factory_id.empty()) {
        throw ValidationError("factory_id", "must be non-empty");
    }
    if (!factory) {
        throw ValidationError("factory", "must be callable");
    }
    if (!factories_.emplace(factory_id, std::move(factory)).second) {
        throw ValidationError("factory_id", "'" + factory_id + "' already registered");
    }
}

bool ModuleFactoryRegistry::contains(const std::string& factory_id) const
{
    return factories_.count(factory_id) != 0;
}

const ModuleFactory& ModuleFactoryRegistry::get(const std::string& factory_id) const
{
    auto it = factories_.find(factory_id);
    if (it == factories_.end()) {
        throw TmsError(Errc::UnknownFactory, "'" + factory_id + "'");
    }
    return it->second;
}

Kernel::Kernel(KernelConfig config, ModuleFactoryRegistry factories)
    : config_(std::move(config)), factories_(std::move(factories)), root_("kernel")
{
    protocol_handler_.event_source().set_parent(&root_);
    root_.set_default_action([this](const event::EventDescriptor& ev) { apply_fleet_event(ev); });

    comms::ServerConfig server_config;
    server_config.port = config_.port;
    server_config.dispatcher_count = config_.dispatcher_count;
    server_config.local_queue_capacity = config_.local_queue_capacity;
    server_config.sticky_dispatch = config_.sticky_dispatch;
    comms_ = std::make_unique<comms::CommsServer>(server_config, protocol_handler_);
}

Kernel::Kernel(KernelConfig config, std::vector<ModuleSpec> specs, ModuleFactoryRegistry factories)
    : Kernel(std::move(config), std::move(factories))
{
    specs_ = std::move(specs);
    specs_preloaded_ = true;
}

Kernel::~Kernel()
{
    shutdown();
}

// Keeps the fleet store current before any listener runs: the root default
// action is step 1 of the propagation protocol, so decision modules always
// observe the state produced by the event they are handling.
void Kernel::apply_fleet_event(const event::EventDescriptor& ev)
{
    if (ev.event_type() == proto::kEventVehicleLoggedIn) {
        fleet_.set_status(ev.source_target(), data::VehicleStatus::LoggedIn, ev.timestamp_ms());
        return;
    }
    if (ev.event_type() == proto::kEventVehicleLoggedOut) {
        fleet_.set_status(ev.source_target(), data::VehicleStatus::LoggedOut, ev.timestamp_ms());
        return;
    }
    const auto* msg = std::any_cast<proto::Message>(&ev.payload());
    if (msg == nullptr || msg->type != proto::MsgType::Telemetry) {
        return;
    }
    const auto& body = std::get<proto::TelemetryBody>(msg->body);
    data::VehicleState state;
    state.vehicle_id = ev.source_target();
    state.latitude = body.latitude;
    state.longitude = body.longitude;
    state.speed_mps = body.speed_mps;
    state.last_update_ms = static_cast<std::int64_t>(body.timestamp_ms);
    state.status = data::VehicleStatus::LoggedIn;
    try {
        if (fleet_.update_vehicle_state(state) == data::UpdateResult::Stale) {
            log::debug("stale telemetry from '", state.vehicle_id, "' ignored");
        }
    } catch (const ValidationError& e) {
        log::warn("telemetry from '", state.vehicle_id, "' rejected: ", e.what());
    }
}

void Kernel::start()
{
    if (started_ || stopped_) {
        return;
    }

    if (!config_.map_path.empty()) {
        road_graph_ = std::make_unique<data::RoadGraph>(data::RoadGraph::load_file(config_.map_path));
        log::info("loaded road graph: ", road_graph_->node_count(), " nodes, ",
                  road_graph_->edge_count(), " edges");
    }
    if (!specs_preloaded_) {
        if (config_.module_config_path.empty()) {
            specs_ = {};
        } else {
            specs_ = load_module_config(config_.module_config_path);
        }
    } else {
        validate_module_specs(specs_);
    }

    for (const auto& spec : specs_) {
        if (!factories_.contains(spec.factory_id)) {
            throw TmsError(Errc::UnknownFactory,
                           "'" + spec.factory_id + "' (module '" + spec.module_id + "')");
        }
    }

    std::map<std::string, const ModuleSpec*> by_id;
    for (const auto& spec : specs_) {
        by_id.emplace(spec.module_id, &spec);
    }

    init_order_ = topological_module_order(specs_);
    for (const auto& module_id : init_order_) {
        const ModuleSpec& spec = *by_id.at(module_id);
        auto module = factories_.get(spec.factory_id)(spec);
        if (!module) {
            throw TmsError(Errc::InitError, "factory '" + spec.factory_id +
                                                "' returned no module for '" + module_id + "'");
        }
        try {
            module->init(*this, spec);
        } catch (const std::exception& e) {
            throw TmsError(Errc::InitError, "module '" + module_id + "': " + e.what());
        }
        DecisionModule* raw = module.get();
        root_.register_listener({spec.module_id, spec.dependencies,
                                 [raw](const event::EventDescriptor& ev) { raw->on_event(ev); }});
        modules_.emplace(module_id, std::move(module));
        log::info("initialized decision module '", module_id, "'");
    }

    // Background tasks only begin once every module is initialized.
    for (const auto& module_id : init_order_) {
        modules_.at(module_id)->start();
    }

    comms_->start();
    started_ = true;
}

void Kernel::shutdown()
{
    if (!started_ || stopped_) {
        stopped_ = true;
        return;
    }
    stopped_ = true;
    // Reverse init order, dependents before their dependencies.
    for (auto it = init_order_.rbegin(); it != init_order_.rend(); ++it) {
        try {
            modules_.at(*it)->stop();
        } catch (const std::exception& e) {
            log::error("stopping module '", *it, "' failed: ", e.what());
        }
    }
    comms_->stop();
    log::info("kernel shut down");
}

comms::SendStatus Kernel::send_to_vehicle(const std::string& vehicle_id, const proto::Message& msg)
{
    return comms_->send_to_vehicle(vehicle_id, msg);
}

std::size_t Kernel::broadcast(const proto::Message& msg)
{
    return comms_->broadcast(msg);
}

} // namespace tms::kernel
