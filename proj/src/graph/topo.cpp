#include "tms/graph/topo.hpp"

#include "tms/util/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tms::graph {

namespace {

// Walks unresolved dependency links until a node repeats; the loop between
// the first and second visit is a genuine directed cycle.
std::vector<std::string> extract_cycle(const std::map<std::string, std::set<std::string>>& pending)
{
    std::vector<std::string> path;
    std::map<std::string, std::size_t> seen_at;
    std::string current = pending.begin()->first;
    for (;;) {
        const auto it = seen_at.find(current);
        if (it != seen_at.end()) {
            std::vector<std::string> cycle(path.begin() + static_cast<long>(it->second),
                                           path.end());
            // The walk ran dependent -> dependency; flip into dependency
            // order (each member depends on the previous one) and normalize
            // the rotation so equal cycles compare equal.
            std::reverse(cycle.begin(), cycle.end());
            const auto smallest = std::min_element(cycle.begin(), cycle.end());
            std::rotate(cycle.begin(), smallest, cycle.end());
            return cycle;
        }
        seen_at[current] = path.size();
        path.push_back(current);
        current = *pending.at(current).begin();
    }
}

} // namespace

std::vector<std::string> topo_order(const DependencyList& nodes)
{
    std::set<std::string> known;
    for (const auto& [id, deps] : nodes) {
        (void)deps;
        known.insert(id);
    }

    // pending[n] = registered dependencies of n not yet emitted.
    std::map<std::string, std::set<std::string>> pending;
    std::map<std::string, std::set<std::string>> dependents;
    for (const auto& [id, deps] : nodes) {
        auto& entry = pending[id];
        for (const auto& dep : deps) {
            if (known.count(dep)) {
                entry.insert(dep);
                dependents[dep].insert(id);
            }
        }
    }

    std::set<std::string> ready;
    for (const auto& [id, deps] : pending) {
        if (deps.empty()) {
            ready.insert(id);
        }
    }

    std::vector<std::string> order;
    order.reserve(nodes.size());
    while (!ready.empty()) {
        const std::string id = *ready.begin();
        ready.erase(ready.begin());
        pending.erase(id);
        order.push_back(id);
        const auto dep_it = dependents.find(id);
        if (dep_it == dependents.end()) {
            continue;
        }
        for (const auto& dependent : dep_it->second) {
            auto& remaining = pending.at(dependent);
            remaining.erase(id);
            if (remaining.empty()) {
                ready.insert(dependent);
            }
        }
    }

    if (!pending.empty()) {
        throw CycleError(extract_cycle(pending));
    }
    return order;
}

} // namespace tms::graph
