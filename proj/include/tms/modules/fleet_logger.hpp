#pragma once

#include "tms/kernel/kernel.hpp"

#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>

namespace tms::modules {

/// Appends one structured line per event:
///   <timestamp_ms>\t<event_type>\t<source_target>
/// Params: path (default "fleet_events.log").
class FleetLoggerModule : public kernel::DecisionModule {
public:
    struct Record {
        std::int64_t timestamp_ms = 0;
        std::string event_type;
        std::string source_target;

        bool operator==(const Record&) const = default;
    };

    static std::string format_line(const Record& record);
    static std::optional<Record> parse_line(const std::string& line);

    void init(kernel::KernelApi& api, const kernel::ModuleSpec& spec) override;
    void on_event(const event::EventDescriptor& ev) override;
    void stop() override;

private:
    std::mutex mu_;
    std::ofstream out_;
};

} // namespace tms::modules
