#include "tms/sim/runner.hpp"
#include "tms/sim/scenario.hpp"
#include "tms/util/error.hpp"
#include "tms/util/log.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"Scripted fleet simulator"};

    std::string scenario_path;
    std::string server = "127.0.0.1:7077";
    std::string report_path;
    std::string log_level = "info";
    std::uint64_t seed = 0;

    app.add_option("--scenario", scenario_path, "Scenario file")->required();
    app.add_option("--server", server, "Server HOST:PORT")->default_val("127.0.0.1:7077");
    app.add_option("--seed", seed, "Run seed, recorded in the report")->default_val(0);
    app.add_option("--report", report_path, "Write the machine-readable report here");
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->default_val("info");

    CLI11_PARSE(app, argc, argv);

    try {
        tms::log::set_level(tms::log::parse_level(log_level));

        const auto colon = server.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == server.size()) {
            throw tms::TmsError(tms::Errc::ParseError, "--server expects HOST:PORT");
        }
        const std::string host = server.substr(0, colon);
        const auto port = static_cast<std::uint16_t>(std::stoul(server.substr(colon + 1)));

        const auto scenario = tms::sim::load_scenario(scenario_path);
        const auto report = tms::sim::run_scenario(scenario, host, port, seed, report_path);
        std::fputs(report.to_text().c_str(), stdout);
        if (!report.all_passed) {
            return EXIT_FAILURE;
        }
    } catch (const tms::TmsError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.code() == tms::Errc::ConnectError ? 2 : EXIT_FAILURE;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
