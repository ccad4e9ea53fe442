#include "tms/modules/proxy_stub.hpp"

#include "tms/modules/params.hpp"
#include "tms/util/log.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace tms::modules {

ProxyStubModule::~ProxyStubModule()
{
    stop();
}

void ProxyStubModule::init(kernel::KernelApi& api, const kernel::ModuleSpec& spec)
{
    api_ = &api;
    period_ms_ = param_int(spec, "snapshot_period_ms", 5000);
    path_ = param_string(spec, "path", "fleet_snapshot.txt");
    if (period_ms_ <= 0) {
        throw ValidationError("snapshot_period_ms", "must be > 0");
    }
}

void ProxyStubModule::on_event(const event::EventDescriptor& ev)
{
    (void)ev; // push-driven only; nothing to do per event
}

void ProxyStubModule::start()
{
    std::lock_guard lock(mu_);
    stopping_ = false;
    task_ = std::thread([this] { task_main(); });
}

void ProxyStubModule::stop()
{
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    std::lock_guard join_lock(join_mu_);
    if (task_.joinable()) {
        task_.join();
    }
}

std::uint64_t ProxyStubModule::snapshots_written() const
{
    std::lock_guard lock(mu_);
    return snapshots_written_;
}

std::string ProxyStubModule::format_state(const data::VehicleState& state)
{
    std::ostringstream os;
    os << "vehicle " << state.vehicle_id << ' ' << state.latitude << ' ' << state.longitude
       << ' ' << state.speed_mps << ' ' << state.last_update_ms << ' '
       << data::vehicle_status_name(state.status);
    return os.str();
}

void ProxyStubModule::task_main()
{
    std::unique_lock lock(mu_);
    while (!stopping_) {
        if (cv_.wait_for(lock, std::chrono::milliseconds(period_ms_),
                         [this] { return stopping_; })) {
            return;
        }
        lock.unlock();
        write_snapshot();
        lock.lock();
        ++snapshots_written_;
    }
}

void ProxyStubModule::write_snapshot()
{
    std::ofstream out(path_, std::ios::trunc);
    if (!out) {
        log::error("proxy stub cannot write snapshot file '", path_, "'");
        return;
    }
    for (const auto& state : api_->fleet().fleet_snapshot()) {
        out << format_state(state) << '\n';
    }
}

} // namespace tms::modules
