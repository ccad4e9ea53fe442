#pragma once

#include "tms/kernel/kernel.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace tms::modules {

/// Dynamic traffic congestion model fed by probe telemetry. A report slower
/// than the threshold near an edge multiplies that edge's travel time by the
/// penalty factor; edges with no slow report inside the window decay back to
/// their base time. Decay is evaluated lazily on each telemetry event using
/// the telemetry timestamps, which keeps the model deterministic under
/// injected clocks.
///
/// Params: window_seconds (60), slow_speed_threshold_mps (3.0),
/// penalty_factor (2.0, >= 1), match_radius_m (100).
class CongestionModule : public kernel::DecisionModule {
public:
    void init(kernel::KernelApi& api, const kernel::ModuleSpec& spec) override;
    void on_event(const event::EventDescriptor& ev) override;

private:
    using EdgeKey = std::pair<std::string, std::string>;

    void apply_decay(std::int64_t now_ms);

    kernel::KernelApi* api_ = nullptr;
    double window_seconds_ = 60.0;
    double slow_speed_threshold_ = 3.0;
    double penalty_factor_ = 2.0;
    double match_radius_m_ = 100.0;

    std::mutex mu_;
    std::map<EdgeKey, std::int64_t> last_slow_report_ms_;
};

} // namespace tms::modules
