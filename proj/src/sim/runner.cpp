#include "tms/sim/runner.hpp"

#include "tms/util/error.hpp"
#include "tms/util/log.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace tms::sim {

std::size_t ScenarioReport::total_telemetry_sent() const
{
    std::size_t total = 0;
    for (const auto& vehicle : vehicles) {
        total += vehicle.telemetry_sent;
    }
    return total;
}

std::string ScenarioReport::to_text() const
{
    std::ostringstream os;
    os << "seed " << seed << '\n';
    os << "duration_s " << duration_s << '\n';
    for (const auto& v : vehicles) {
        os << "vehicle " << v.vehicle_id << " sent " << v.telemetry_sent << " advisories "
           << v.advisories.size() << " warnings " << v.warnings.size() << " other "
           << v.other_inbound << (v.disconnected_early ? " disconnected" : "") << '\n';
    }
    for (const auto& e : expectations) {
        os << "expect " << e.expectation.vehicle_id << ' '
           << (e.expectation.kind == Expectation::Kind::Advisories ? "advisories" : "warnings")
           << ' ' << e.expectation.min_count << " observed " << e.observed << ' '
           << (e.passed ? "pass" : "fail") << '\n';
    }
    os << "summary " << (all_passed ? "pass" : "fail") << '\n';
    return os.str();
}

ScenarioReport run_scenario(const Scenario& scenario, const std::string& host,
                            std::uint16_t port, std::uint64_t seed,
                            const std::string& report_path)
{
    const data::RoadGraph map = data::RoadGraph::load_file(scenario.map_path);
    validate_scenario(scenario, map);

    ScenarioReport report;
    report.seed = seed;
    report.duration_s = scenario.duration_s;
    report.vehicles.resize(scenario.vehicles.size());

    std::vector<std::exception_ptr> failures(scenario.vehicles.size());
    std::vector<WallClock> clocks(scenario.vehicles.size());
    std::vector<std::thread> threads;
    threads.reserve(scenario.vehicles.size());
    for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
        threads.emplace_back([&, i] {
            try {
                report.vehicles[i] =
                    run_simulated_vehicle(scenario.vehicles[i], map, host, port,
                                          scenario.duration_s, clocks[i], seed + i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        });
    }
    for (auto& thread : threads) {
        thread.join();
    }
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (failures[i]) {
            log::error("vehicle '", scenario.vehicles[i].vehicle_id, "' failed");
            std::rethrow_exception(failures[i]);
        }
    }

    std::sort(report.vehicles.begin(), report.vehicles.end(),
              [](const VehicleRunResult& a, const VehicleRunResult& b) {
                  return a.vehicle_id < b.vehicle_id;
              });

    report.all_passed = true;
    for (const auto& expectation : scenario.expectations) {
        ExpectationResult result;
        result.expectation = expectation;
        const auto it = std::find_if(report.vehicles.begin(), report.vehicles.end(),
                                     [&](const VehicleRunResult& v) {
                                         return v.vehicle_id == expectation.vehicle_id;
                                     });
        if (it != report.vehicles.end()) {
            result.observed = expectation.kind == Expectation::Kind::Advisories
                                  ? it->advisories.size()
                                  : it->warnings.size();
        }
        result.passed = result.observed >= expectation.min_count;
        report.all_passed = report.all_passed && result.passed;
        report.expectations.push_back(std::move(result));
    }

    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) {
            log::error("cannot write report file '", report_path, "'");
        } else {
            out << report.to_text();
        }
    }
    return report;
}

} // namespace tms::sim
