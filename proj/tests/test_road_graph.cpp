#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tms/data/road_graph.hpp"
#include "tms/util/error.hpp"

#include "support/helpers.hpp"
#include "support/oracles.hpp"

#include <random>

using namespace tms;
using namespace tms::data;

namespace {

// Triangle fixture: A-B and B-C cost 10 s, the direct A-C shortcut 25 s,
// all bidirectional.
constexpr const char* kTriangleMap = R"(# triangle fixture
node A 48.8500 2.3500
node B 48.8500 2.3600
node C 48.8580 2.3550

edge A B 10
edge B A 10
edge B C 10
edge C B 10
edge A C 25
edge C A 25
)";

RoadGraph triangle()
{
    testutil::TempDir dir;
    return RoadGraph::load_file(dir.write("triangle.map", kTriangleMap));
}

} // namespace

TEST_CASE("triangle fixture loads with 3 nodes and 6 directed edges")
{
    const auto graph = triangle();
    CHECK(graph.node_count() == 3);
    CHECK(graph.edge_count() == 6);
    CHECK(graph.has_node("A"));
    CHECK(graph.edge_weight("A", "B") == 10.0);
    CHECK(graph.edge_base("A", "C") == 25.0);
    CHECK_FALSE(graph.edge_weight("A", "Z").has_value());
}

TEST_CASE("an edge naming an absent node is a DanglingEdge")
{
    testutil::TempDir dir;
    const auto path = dir.write("bad.map", "node A 0 0\nedge A Z 5\n");
    try {
        RoadGraph::load_file(path);
        FAIL("expected DanglingEdge");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::DanglingEdge);
        CHECK(std::string(e.what()).find("Z") != std::string::npos);
    }
}

TEST_CASE("edges may precede the nodes they reference")
{
    testutil::TempDir dir;
    const auto path = dir.write("rev.map", "edge A B 5\nnode A 0 0\nnode B 0 0.001\n");
    const auto graph = RoadGraph::load_file(path);
    CHECK(graph.edge_count() == 1);
}

TEST_CASE("empty and malformed files are ParseErrors")
{
    testutil::TempDir dir;
    const auto cases = {
        dir.write("empty.map", ""),
        dir.write("comment.map", "# nothing here\n\n"),
        dir.write("garbage.map", "street A B 5\n"),
        dir.write("short.map", "node A 1.0\n"),
        dir.write("extra.map", "node A 1.0 2.0 3.0\n"),
        dir.write("dup.map", "node A 0 0\nnode A 1 1\n"),
        dir.write("dupedge.map", "node A 0 0\nnode B 0 0.01\nedge A B 5\nedge A B 7\n"),
        dir.write("zeroedge.map", "node A 0 0\nnode B 0 0.01\nedge A B 0\n"),
    };
    for (const auto& path : cases) {
        CAPTURE(path);
        try {
            RoadGraph::load_file(path);
            FAIL_CHECK("expected ParseError for " << path);
        } catch (const TmsError& e) {
            CHECK(e.code() == Errc::ParseError);
        }
    }
    CHECK_THROWS_AS(RoadGraph::load_file(dir.file("missing.map")), TmsError);
}

TEST_CASE("update_edge_weight mutates only the current weight")
{
    auto graph = triangle();
    graph.update_edge_weight("A", "B", 25.0);
    CHECK(graph.edge_weight("A", "B") == 25.0);
    CHECK(graph.edge_base("A", "B") == 10.0);
    CHECK(graph.edge_weight("B", "A") == 10.0); // directions are independent

    try {
        graph.update_edge_weight("A", "Z", 5.0);
        FAIL("expected UnknownEdge");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::UnknownEdge);
    }
    CHECK_THROWS_AS(graph.update_edge_weight("A", "B", 0.0), ValidationError);
    CHECK_THROWS_AS(graph.update_edge_weight("A", "B", -3.0), ValidationError);
}

TEST_CASE("shortest route: identity, triangle oracle, unreachable, unknown")
{
    auto graph = triangle();

    const auto self_route = graph.shortest_route("A", "A");
    REQUIRE(self_route.has_value());
    CHECK(self_route->nodes == std::vector<std::string>{"A"});
    CHECK(self_route->total_seconds == 0.0);

    // Enumerating the simple paths A->C by hand: [A,B,C] = 20, [A,C] = 25.
    const auto route = graph.shortest_route("A", "C");
    REQUIRE(route.has_value());
    CHECK(route->nodes == std::vector<std::string>{"A", "B", "C"});
    CHECK(route->total_seconds == 20.0);

    // Congestion on A-B flips the optimum to the direct edge.
    graph.update_edge_weight("A", "B", 20.0);
    const auto rerouted = graph.shortest_route("A", "C");
    REQUIRE(rerouted.has_value());
    CHECK(rerouted->nodes == std::vector<std::string>{"A", "C"});
    CHECK(rerouted->total_seconds == 25.0);

    CHECK_THROWS_AS(graph.shortest_route("A", "Z"), TmsError);

    RoadGraph disconnected;
    disconnected.add_node("A", {0, 0});
    disconnected.add_node("B", {0, 0.01});
    CHECK_FALSE(disconnected.shortest_route("A", "B").has_value());
}

TEST_CASE("equal-cost ties pick the lexicographically smallest sequence")
{
    RoadGraph graph;
    for (const auto* id : {"A", "B", "C", "D"}) {
        graph.add_node(id, {0, 0});
    }
    // Two cost-2 routes A->D: [A,B,D] and [A,C,D]; the answer must be via B.
    graph.add_edge("A", "B", 1.0);
    graph.add_edge("A", "C", 1.0);
    graph.add_edge("B", "D", 1.0);
    graph.add_edge("C", "D", 1.0);
    const auto route = graph.shortest_route("A", "D");
    REQUIRE(route.has_value());
    CHECK(route->nodes == std::vector<std::string>{"A", "B", "D"});
}

TEST_CASE("random graphs match exhaustive simple-path enumeration")
{
    std::mt19937 rng(31415);
    std::uniform_int_distribution<std::size_t> node_count(2, 8);
    std::bernoulli_distribution edge(0.35);
    std::uniform_int_distribution<int> weight(1, 9);

    for (int round = 0; round < 150; ++round) {
        const std::size_t n = node_count(rng);
        RoadGraph graph;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back("n" + std::to_string(i));
            graph.add_node(ids.back(), {0.0, 0.001 * static_cast<double>(i)});
        }
        std::vector<oracle::WeightedEdge> edges;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && edge(rng)) {
                    const double w = weight(rng);
                    graph.add_edge(ids[i], ids[j], w);
                    edges.push_back({ids[i], ids[j], w});
                }
            }
        }
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const auto& from = ids[pick(rng)];
        const auto& to = ids[pick(rng)];

        const auto expected = oracle::shortest_route_by_enumeration(ids, edges, from, to);
        const auto actual = graph.shortest_route(from, to);
        CHECK(actual.has_value() == expected.has_value());
        if (actual && expected) {
            CHECK(actual->total_seconds == expected->second);
            CHECK(actual->nodes == expected->first);
        }
    }
}
