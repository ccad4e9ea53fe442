#pragma once

#include "tms/util/geo.hpp"

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace tms::data {

struct Route {
    std::vector<std::string> nodes;
    double total_seconds = 0.0;

    bool operator==(const Route&) const = default;
};

/// Directed road network with per-edge travel times: an immutable structure
/// (nodes, edges, base times) plus mutable current weights that congestion
/// models adjust at runtime. All operations are safe for concurrent use.
class RoadGraph {
public:
    RoadGraph() = default;
    // Movable for construction-time handoff only; not copyable. Moving a
    // graph other threads are still using is a caller error.
    RoadGraph(RoadGraph&& other) noexcept;
    RoadGraph& operator=(RoadGraph&& other) noexcept;
    RoadGraph(const RoadGraph&) = delete;
    RoadGraph& operator=(const RoadGraph&) = delete;

    /// Throws ValidationError on duplicates or non-positive travel times and
    /// TmsError{DanglingEdge} when an edge names a missing node.
    void add_node(const std::string& node_id, geo::LatLon position);
    void add_edge(const std::string& from, const std::string& to, double base_seconds);

    /// Plain-text format, one record per line, '#' comments:
    ///   node ID LAT LON
    ///   edge FROM TO SECONDS
    /// Node records may appear in any order relative to the edges that use
    /// them. Throws TmsError{ParseError} (including for an empty file) and
    /// TmsError{DanglingEdge}.
    static RoadGraph load_file(const std::string& path);

    bool has_node(const std::string& node_id) const;
    std::optional<geo::LatLon> node_position(const std::string& node_id) const;
    std::vector<std::string> node_ids() const;
    std::size_t node_count() const;
    std::size_t edge_count() const;

    struct EdgeView {
        std::string from;
        std::string to;
        double base_seconds = 0.0;
        double current_seconds = 0.0;
    };
    std::vector<EdgeView> edges() const;

    std::optional<double> edge_weight(const std::string& from, const std::string& to) const;
    std::optional<double> edge_base(const std::string& from, const std::string& to) const;

    /// Replaces the current weight. Throws TmsError{UnknownEdge} and
    /// ValidationError for weights <= 0.
    void update_edge_weight(const std::string& from, const std::string& to,
                            double weight_seconds);

    /// Minimum total current weight from `from` to `to`; nullopt when
    /// unreachable. Equal-cost ties resolve to the lexicographically
    /// smallest node sequence. Throws TmsError{UnknownNode}.
    std::optional<Route> shortest_route(const std::string& from, const std::string& to) const;

private:
    struct EdgeInfo {
        double base_seconds = 0.0;
        double current_seconds = 0.0;
    };

    mutable std::shared_mutex mu_;
    std::map<std::string, geo::LatLon> nodes_;
    std::map<std::pair<std::string, std::string>, EdgeInfo> edges_;
};

} // namespace tms::data
