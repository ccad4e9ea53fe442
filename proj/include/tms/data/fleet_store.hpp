#pragma once

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace tms::data {

enum class VehicleStatus { LoggedIn, LoggedOut };

const char* vehicle_status_name(VehicleStatus status);

/// Latest known telemetry of one vehicle.
struct VehicleState {
    std::string vehicle_id;
    double latitude = 0.0;
    double longitude = 0.0;
    double speed_mps = 0.0;
    std::int64_t last_update_ms = 0;
    VehicleStatus status = VehicleStatus::LoggedIn;

    bool operator==(const VehicleState&) const = default;
};

enum class UpdateResult { Applied, Stale };

/// Synchronized fleet state. Updates apply only when their timestamp is at
/// least the stored one, so last_update is monotone per vehicle and
/// concurrent dispatcher writes resolve to the newest state. Logged-out
/// entries are retained for last-known-position consumers.
class FleetStore {
public:
    /// Throws ValidationError on out-of-range position or negative speed.
    UpdateResult update_vehicle_state(const VehicleState& state);

    std::optional<VehicleState> get_vehicle_state(const std::string& vehicle_id) const;

    /// Point-in-time copy, ordered by vehicle id; entries are never torn.
    std::vector<VehicleState> fleet_snapshot() const;

    /// Lifecycle transition: flips status, creating the entry when absent.
    /// Timestamp is bumped to max(stored, at_ms) so a login/logout always
    /// lands even when telemetry clocks run ahead.
    void set_status(const std::string& vehicle_id, VehicleStatus status, std::int64_t at_ms);

    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, VehicleState> states_;
};

} // namespace tms::data
