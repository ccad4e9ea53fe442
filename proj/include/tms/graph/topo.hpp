#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tms::graph {

/// A node plus the ids that must come earlier.
using DependencyList = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Dependency-respecting order over `nodes`: every dependency that is itself
/// a node precedes its dependent. Dependencies naming ids outside the node
/// set are ignored. Ties are broken by taking the lexicographically smallest
/// ready node, which makes the result the lexicographically smallest valid
/// order. Throws tms::CycleError naming an actual cycle when one exists.
std::vector<std::string> topo_order(const DependencyList& nodes);

} // namespace tms::graph
