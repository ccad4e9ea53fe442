#pragma once

#include "tms/comms/server.hpp"
#include "tms/data/fleet_store.hpp"
#include "tms/data/road_graph.hpp"
#include "tms/event/event_source.hpp"
#include "tms/kernel/module_config.hpp"
#include "tms/proto/handler.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tms::kernel {

/// The framework API handed to every decision module at init: messaging into
/// the comms subsystem, the shared data stores and the root event source.
/// All entry points are safe for concurrent calls from dispatcher threads
/// and module background tasks. Every module sees the same instance.
class KernelApi {
public:
    virtual ~KernelApi() = default;

    virtual comms::SendStatus send_to_vehicle(const std::string& vehicle_id,
                                              const proto::Message& msg) = 0;
    virtual std::size_t broadcast(const proto::Message& msg) = 0;
    virtual data::FleetStore& fleet() = 0;

    /// Cartography store; nullptr when the server runs without a map.
    virtual data::RoadGraph* cartography() = 0;

    virtual event::EventSourceNode& root_event_source() = 0;
};

/// A pluggable decision module. After init the kernel registers it on the
/// root event source under its module id, with its configured dependencies
/// as listener dependencies. on_event may be invoked concurrently for
/// distinct events. Modules with a background task start it in start() and
/// must make stop() idempotent.
class DecisionModule {
public:
    virtual ~DecisionModule() = default;

    virtual void init(KernelApi& api, const ModuleSpec& spec) = 0;
    virtual void on_event(const event::EventDescriptor& ev) = 0;
    virtual void start() {}
    virtual void stop() {}
};

using ModuleFactory = std::function<std::unique_ptr<DecisionModule>(const ModuleSpec&)>;

/// Factory registration replaces runtime class loading: every factory id
/// referenced by the configuration must be registered before startup.
class ModuleFactoryRegistry {
public:
    void register_factory(const std::string& factory_id, ModuleFactory factory);
    bool contains(const std::string& factory_id) const;

    /// Throws TmsError{UnknownFactory}.
    const ModuleFactory& get(const std::string& factory_id) const;

private:
    std::map<std::string, ModuleFactory> factories_;
};

struct KernelConfig {
    std::string module_config_path; // empty when specs are passed directly
    std::string map_path;           // empty runs without cartography
    std::uint16_t port = 7077;
    std::size_t dispatcher_count = 4;
    std::size_t local_queue_capacity = 256;
    bool sticky_dispatch = false;
};

/// Owns the whole server: data stores, the root event source, the telematic
/// protocol handler (parented to the root) and the comms subsystem. Startup
/// order: stores, comms construction, modules in dependency order, module
/// background tasks, then accepting connections — so no event fires before
/// its listeners exist. A module init failure aborts startup before any
/// background task runs.
class Kernel : public KernelApi {
public:
    Kernel(KernelConfig config, ModuleFactoryRegistry factories);
    Kernel(KernelConfig config, std::vector<ModuleSpec> specs, ModuleFactoryRegistry factories);
    ~Kernel() override;

    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    /// Throws TmsError{UnknownFactory}, TmsError{InitError}, CycleError,
    /// TmsError{BindError} and config load errors.
    void start();

    /// Stops module background tasks, then the comms server (joining every
    /// worker and dispatcher flow). Idempotent.
    void shutdown();

    bool running() const { return started_ && !stopped_; }

    // KernelApi
    comms::SendStatus send_to_vehicle(const std::string& vehicle_id,
                                      const proto::Message& msg) override;
    std::size_t broadcast(const proto::Message& msg) override;
    data::FleetStore& fleet() override { return fleet_; }
    data::RoadGraph* cartography() override { return road_graph_.get(); }
    event::EventSourceNode& root_event_source() override { return root_; }

    comms::CommsServer& comms() { return *comms_; }
    proto::ProtocolHandler& protocol() { return protocol_handler_; }
    const std::vector<std::string>& module_init_order() const { return init_order_; }

private:
    void apply_fleet_event(const event::EventDescriptor& ev);

    KernelConfig config_;
    ModuleFactoryRegistry factories_;
    std::vector<ModuleSpec> specs_;
    bool specs_preloaded_ = false;

    data::FleetStore fleet_;
    std::unique_ptr<data::RoadGraph> road_graph_;
    event::EventSourceNode root_;
    proto::ProtocolHandler protocol_handler_;
    std::unique_ptr<comms::CommsServer> comms_;

    std::map<std::string, std::unique_ptr<DecisionModule>> modules_;
    std::vector<std::string> init_order_;
    bool started_ = false;
    bool stopped_ = false;
};

} // namespace tms::kernel
