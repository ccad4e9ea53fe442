#include "tms/data/fleet_store.hpp"

#include "tms/util/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tms::data {

const char* vehicle_status_name(VehicleStatus status)
{
    return status == VehicleStatus::LoggedIn ? "LOGGED_IN" : "LOGGED_OUT";
}

UpdateResult FleetStore::update_vehicle_state(const VehicleState& state)
{
    if (state.vehicle_id.empty()) {
        throw ValidationError("vehicle_id", "must be non-empty");
    }
    if (!std::isfinite(state.latitude) || state.latitude < -90.0 || state.latitude > 90.0) {
        throw ValidationError("latitude", "outside [-90, 90]");
    }
    if (!std::isfinite(state.longitude) || state.longitude < -180.0 || state.longitude > 180.0) {
        throw ValidationError("longitude", "outside [-180, 180]");
    }
    if (!std::isfinite(state.speed_mps) || state.speed_mps < 0.0) {
        throw ValidationError("speed", "must be finite and >= 0");
    }

    std::unique_lock lock(mu_);
    auto it = states_.find(state.vehicle_id);
    if (it == states_.end()) {
        states_.emplace(state.vehicle_id, state);
        return UpdateResult::Applied;
    }
    if (state.last_update_ms < it->second.last_update_ms) {
        return UpdateResult::Stale;
    }
    it->second = state;
    return UpdateResult::Applied;
}

std::optional<VehicleState> FleetStore::get_vehicle_state(const std::string& vehicle_id) const
{
    std::shared_lock lock(mu_);
    auto it = states_.find(vehicle_id);
    if (it == states_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<VehicleState> FleetStore::fleet_snapshot() const
{
    std::vector<VehicleState> snapshot;
    {
        std::shared_lock lock(mu_);
        snapshot.reserve(states_.size());
        for (const auto& [id, state] : states_) {
            snapshot.push_back(state);
        }
    }
    std::sort(snapshot.begin(), snapshot.end(),
              [](const VehicleState& a, const VehicleState& b) {
                  return a.vehicle_id < b.vehicle_id;
              });
    return snapshot;
}

void FleetStore::set_status(const std::string& vehicle_id, VehicleStatus status,
                            std::int64_t at_ms)
{
    std::unique_lock lock(mu_);
    auto [it, inserted] = states_.try_emplace(vehicle_id);
    if (inserted) {
        it->second.vehicle_id = vehicle_id;
    }
    it->second.status = status;
    it->second.last_update_ms = std::max(it->second.last_update_ms, at_ms);
}

std::size_t FleetStore::size() const
{
    std::shared_lock lock(mu_);
    return states_.size();
}

} // namespace tms::data
