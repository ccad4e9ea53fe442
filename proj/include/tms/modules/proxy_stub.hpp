#pragma once

#include "tms/kernel/kernel.hpp"

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>

namespace tms::modules {

/// Stand-in for a proxy to a legacy system: a background task that
/// periodically writes the fleet snapshot to a file. Demonstrates the
/// module style that runs in parallel with the event flow.
///
/// Params: snapshot_period_ms (5000), path ("fleet_snapshot.txt").
class ProxyStubModule : public kernel::DecisionModule {
public:
    ~ProxyStubModule() override;

    void init(kernel::KernelApi& api, const kernel::ModuleSpec& spec) override;
    void on_event(const event::EventDescriptor& ev) override;
    void start() override;
    void stop() override;

    std::uint64_t snapshots_written() const;

    /// One snapshot line: "vehicle ID LAT LON SPEED LAST_UPDATE_MS STATUS".
    static std::string format_state(const data::VehicleState& state);

private:
    void task_main();
    void write_snapshot();

    kernel::KernelApi* api_ = nullptr;
    std::int64_t period_ms_ = 5000;
    std::string path_ = "fleet_snapshot.txt";

    std::thread task_;
    mutable std::mutex mu_;
    std::mutex join_mu_;
    std::condition_variable cv_;
    bool stopping_ = false;
    std::uint64_t snapshots_written_ = 0;
};

} // namespace tms::modules
