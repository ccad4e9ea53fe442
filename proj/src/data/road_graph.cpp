#include "tms/data/road_graph.hpp"

#include "tms/util/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

namespace tms::data {

RoadGraph::RoadGraph(RoadGraph&& other) noexcept
{
    std::unique_lock lock(other.mu_);
    nodes_ = std::move(other.nodes_);
    edges_ = std::move(other.edges_);
}

RoadGraph& RoadGraph::operator=(RoadGraph&& other) noexcept
{
    if (this != &other) {
        std::scoped_lock lock(mu_, other.mu_);
        nodes_ = std::move(other.nodes_);
        edges_ = std::move(other.edges_);
    }
    return *this;
}

void RoadGraph::add_node(const std::string& node_id, geo::LatLon position)
{
    if (node_id.empty()) {
        throw ValidationError("node_id", "must be non-empty");
    }
    std::unique_lock lock(mu_);
    if (!nodes_.emplace(node_id, position).second) {
        throw ValidationError("node_id", "duplicate node '" + node_id + "'");
    }
}

void RoadGraph::add_edge(const std::string& from, const std::string& to, double base_seconds)
{
    if (!std::isfinite(base_seconds) || base_seconds <= 0.0) {
        throw ValidationError("base_seconds", "must be finite and > 0");
    }
    std::unique_lock lock(mu_);
    if (!nodes_.count(from) || !nodes_.count(to)) {
        throw TmsError(Errc::DanglingEdge, "edge " + from + " -> " + to + " names a missing node");
    }
    if (!edges_.emplace(std::make_pair(from, to), EdgeInfo{base_seconds, base_seconds}).second) {
        throw ValidationError("edge", "duplicate edge " + from + " -> " + to);
    }
}

RoadGraph RoadGraph::load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw TmsError(Errc::ParseError, "cannot open road graph file '" + path + "'");
    }

    struct NodeRecord {
        std::string id;
        geo::LatLon position;
    };
    struct EdgeRecord {
        std::string from;
        std::string to;
        double seconds;
    };
    std::vector<NodeRecord> node_records;
    std::vector<EdgeRecord> edge_records;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string kind;
        if (!(fields >> kind)) {
            continue; // blank or comment-only line
        }
        const std::string where = path + ":" + std::to_string(line_no);
        if (kind == "node") {
            NodeRecord rec;
            if (!(fields >> rec.id >> rec.position.lat >> rec.position.lon)) {
                throw TmsError(Errc::ParseError, where + ": expected 'node ID LAT LON'");
            }
            node_records.push_back(std::move(rec));
        } else if (kind == "edge") {
            EdgeRecord rec;
            if (!(fields >> rec.from >> rec.to >> rec.seconds)) {
                throw TmsError(Errc::ParseError, where + ": expected 'edge FROM TO SECONDS'");
            }
            edge_records.push_back(std::move(rec));
        } else {
            throw TmsError(Errc::ParseError, where + ": unknown record '" + kind + "'");
        }
        std::string extra;
        if (fields >> extra) {
            throw TmsError(Errc::ParseError, where + ": trailing fields");
        }
    }

    if (node_records.empty() && edge_records.empty()) {
        throw TmsError(Errc::ParseError, path + ": no records");
    }

    RoadGraph graph;
    for (const auto& rec : node_records) {
        try {
            graph.add_node(rec.id, rec.position);
        } catch (const ValidationError& e) {
            throw TmsError(Errc::ParseError, path + ": " + e.what());
        }
    }
    for (const auto& rec : edge_records) {
        try {
            graph.add_edge(rec.from, rec.to, rec.seconds);
        } catch (const ValidationError& e) {
            throw TmsError(Errc::ParseError, path + ": " + e.what());
        }
    }
    return graph;
}

bool RoadGraph::has_node(const std::string& node_id) const
{
    std::shared_lock lock(mu_);
    return nodes_.count(node_id) != 0;
}

std::optional<geo::LatLon> RoadGraph::node_position(const std::string& node_id) const
{
    std::shared_lock lock(mu_);
    auto it = nodes_.find(node_id);
    if (it == nodes_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> RoadGraph::node_ids() const
{
    std::shared_lock lock(mu_);
    std::vector<std::string> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, pos] : nodes_) {
        ids.push_back(id);
    }
    return ids;
}

std::size_t RoadGraph::node_count() const
{
    std::shared_lock lock(mu_);
    return nodes_.size();
}

std::size_t RoadGraph::edge_count() const
{
    std::shared_lock lock(mu_);
    return edges_.size();
}

std::vector<RoadGraph::EdgeView> RoadGraph::edges() const
{
    std::shared_lock lock(mu_);
    std::vector<EdgeView> out;
    out.reserve(edges_.size());
    for (const auto& [key, info] : edges_) {
        out.push_back({key.first, key.second, info.base_seconds, info.current_seconds});
    }
    return out;
}

std::optional<double> RoadGraph::edge_weight(const std::string& from, const std::string& to) const
{
    std::shared_lock lock(mu_);
    auto it = edges_.find({from, to});
    if (it == edges_.end()) {
        return std::nullopt;
    }
    return it->second.current_seconds;
}

std::optional<double> RoadGraph::edge_base(const std::string& from, const std::string& to) const
{
    std::shared_lock lock(mu_);
    auto it = edges_.find({from, to});
    if (it == edges_.end()) {
        return std::nullopt;
    }
    return it->second.base_seconds;
}

void RoadGraph::update_edge_weight(const std::string& from, const std::string& to,
                                   double weight_seconds)
{
    if (!std::isfinite(weight_seconds) || weight_seconds <= 0.0) {
        throw ValidationError("weight_seconds", "must be finite and > 0");
    }
    std::unique_lock lock(mu_);
    auto it = edges_.find({from, to});
    if (it == edges_.end()) {
        throw TmsError(Errc::UnknownEdge, from + " -> " + to);
    }
    it->second.current_seconds = weight_seconds;
}

std::optional<Route> RoadGraph::shortest_route(const std::string& from,
                                               const std::string& to) const
{
    std::shared_lock lock(mu_);
    if (!nodes_.count(from)) {
        throw TmsError(Errc::UnknownNode, "'" + from + "'");
    }
    if (!nodes_.count(to)) {
        throw TmsError(Errc::UnknownNode, "'" + to + "'");
    }

    std::map<std::string, std::vector<std::pair<std::string, double>>> adjacency;
    for (const auto& [key, info] : edges_) {
        adjacency[key.first].emplace_back(key.second, info.current_seconds);
    }

    // Dijkstra over current weights. Candidates carry their full node
    // sequence so equal costs can tie-break lexicographically; maps here are
    // small (road networks at deployment scale), so the copies are cheap.
    struct Candidate {
        double cost = std::numeric_limits<double>::infinity();
        std::vector<std::string> path;
        bool settled = false;
    };
    std::map<std::string, Candidate> best;
    best[from] = {0.0, {from}, false};

    for (;;) {
        // Pick the unsettled candidate with the smallest (cost, path).
        std::map<std::string, Candidate>::iterator current = best.end();
        for (auto it = best.begin(); it != best.end(); ++it) {
            if (it->second.settled) {
                continue;
            }
            if (current == best.end() || it->second.cost < current->second.cost ||
                (it->second.cost == current->second.cost &&
                 it->second.path < current->second.path)) {
                current = it;
            }
        }
        if (current == best.end()) {
            return std::nullopt; // frontier exhausted without reaching `to`
        }
        current->second.settled = true;
        if (current->first == to) {
            return Route{current->second.path, current->second.cost};
        }

        const auto adj = adjacency.find(current->first);
        if (adj == adjacency.end()) {
            continue;
        }
        const Candidate settled_copy = current->second;
        for (const auto& [neighbor, weight] : adj->second) {
            auto& next = best[neighbor];
            if (next.settled) {
                continue;
            }
            const double cost = settled_copy.cost + weight;
            auto path = settled_copy.path;
            path.push_back(neighbor);
            if (cost < next.cost || (cost == next.cost && path < next.path)) {
                next.cost = cost;
                next.path = std::move(path);
            }
        }
    }
}

} // namespace tms::data
