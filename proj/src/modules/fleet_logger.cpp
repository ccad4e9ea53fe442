#include "tms/modules/fleet_logger.hpp"

#include "tms/modules/params.hpp"
#include "tms/util/error.hpp"

#include <sstream>

namespace tms::modules {

std::string FleetLoggerModule::format_line(const Record& record)
{
    std::ostringstream os;
    os << record.timestamp_ms << '\t' << record.event_type << '\t' << record.source_target;
    return os.str();
}

std::optional<FleetLoggerModule::Record> FleetLoggerModule::parse_line(const std::string& line)
{
    const auto first = line.find('\t');
    if (first == std::string::npos) {
        return std::nullopt;
    }
    const auto second = line.find('\t', first + 1);
    if (second == std::string::npos) {
        return std::nullopt;
    }
    Record record;
    try {
        record.timestamp_ms = std::stoll(line.substr(0, first));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    record.event_type = line.substr(first + 1, second - first - 1);
    record.source_target = line.substr(second + 1);
    if (record.event_type.empty()) {
        return std::nullopt;
    }
    return record;
}

void FleetLoggerModule::init(kernel::KernelApi& api, const kernel::ModuleSpec& spec)
{
    (void)api;
    const std::string path = param_string(spec, "path", "fleet_events.log");
    std::lock_guard lock(mu_);
    out_.open(path, std::ios::app);
    if (!out_) {
        throw ValidationError("path", "cannot open event log '" + path + "'");
    }
}

void FleetLoggerModule::on_event(const event::EventDescriptor& ev)
{
    std::lock_guard lock(mu_);
    if (!out_.is_open()) {
        return;
    }
    out_ << format_line({ev.timestamp_ms(), ev.event_type(), ev.source_target()}) << '\n';
    out_.flush();
}

void FleetLoggerModule::stop()
{
    std::lock_guard lock(mu_);
    if (out_.is_open()) {
        out_.close();
    }
}

} // namespace tms::modules
