#include "tms/kernel/kernel.hpp"
#include "tms/modules/builtin.hpp"
#include "tms/util/error.hpp"
#include "tms/util/log.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <thread>

namespace {

std::atomic<bool> g_stop_requested{false};

void handle_signal(int)
{
    g_stop_requested.store(true);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Telematic management server"};

    std::string config_path;
    std::string map_path;
    std::string log_level = "info";
    tms::kernel::KernelConfig config;

    app.add_option("--config", config_path, "Module configuration XML")->required();
    app.add_option("--map", map_path, "Road graph file");
    app.add_option("--port", config.port, "TCP listen port")->default_val(7077);
    app.add_option("--dispatchers", config.dispatcher_count, "Dispatcher thread count")
        ->default_val(4);
    app.add_option("--local-queue-capacity", config.local_queue_capacity,
                   "Per-vehicle outbound queue capacity")
        ->default_val(256);
    app.add_flag("--sticky-dispatch", config.sticky_dispatch,
                 "Pin each vehicle to one dispatcher for strict per-vehicle ordering");
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->default_val("info");

    CLI11_PARSE(app, argc, argv);

    try {
        tms::log::set_level(tms::log::parse_level(log_level));
    } catch (const tms::TmsError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return EXIT_FAILURE;
    }

    config.module_config_path = config_path;
    config.map_path = map_path;

    tms::kernel::ModuleFactoryRegistry factories;
    tms::modules::register_builtin_factories(factories);

    try {
        tms::kernel::Kernel kernel(config, std::move(factories));
        kernel.start();

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        tms::log::info("server running; Ctrl-C to stop");
        while (!g_stop_requested.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
        kernel.shutdown();
    } catch (const std::exception& e) {
        tms::log::error("startup failed: ", e.what());
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
